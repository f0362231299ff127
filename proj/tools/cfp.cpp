// cfp: generate instances, solve them, count solutions, run benchmarks.
//
// Exit codes: 0 success, 1 other failure (e.g. a generator missed its count
// target), 2 usage error, 3 solve Unstable, 4 solve CapExceeded, 5 I/O or
// input-file error.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "cfp/cfp.hpp"

namespace {

using nlohmann::json;

constexpr int kExitUsage = 2;
constexpr int kExitUnstable = 3;
constexpr int kExitCap = 4;
constexpr int kExitIo = 5;

std::uint64_t env_seed()
{
    const char* s = std::getenv("CFP_SEED");
    if (!s || !*s) return 0;
    try {
        std::size_t used = 0;
        const auto v = std::stoull(s, &used);
        if (used == std::string(s).size()) return v;
    } catch (const std::exception&) {
    }
    throw cfp::UsageError(std::string("CFP_SEED is not an unsigned integer: '") + s + "'");
}

json selection_json(const cfp::ColourfulSimplex& s)
{
    json a = json::array();
    for (int v : s.selection) a.push_back(v + 1);
    return a;
}

json vector_json(const cfp::Vector& v)
{
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

template <class F>
auto as_usage(F&& f)
{
    try {
        return f();
    } catch (const cfp::Error& e) {
        throw cfp::UsageError(e.what());
    }
}

json scalar_json(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

struct GenArgs {
    std::string kind;
    int d = 3;
    double theta = std::numbers::pi / 6.0;
    double epsilon = 0.01;
    std::optional<std::uint64_t> seed;
    std::string output;
};

int run_gen(const GenArgs& a)
{
    cfp::GeneratorSpec spec;
    spec.kind = as_usage([&] { return cfp::parse_generator(a.kind); });
    spec.d = a.d;
    spec.theta = a.theta;
    spec.epsilon = a.epsilon;
    spec.seed = a.seed.value_or(env_seed());
    try {
        spec.validate();
    } catch (const cfp::Error& e) {
        throw cfp::UsageError(e.what());
    }
    const auto inst = cfp::generate(spec);
    std::vector<std::string> comments{"generator " + cfp::to_string(spec.kind) + " d=" + std::to_string(spec.d) +
                                      " seed=" + std::to_string(spec.seed) + " theta=" + std::to_string(spec.theta) +
                                      " epsilon=" + std::to_string(spec.epsilon)};
    if (cfp::has_count_target(spec.kind)) comments.push_back(inst.count_verified ? "count-verified" : "count-unverified");
    std::ofstream f(a.output, std::ios::binary | std::ios::trunc);
    if (!f) throw cfp::IoError("cannot open " + a.output + " for writing");
    f << cfp::write_configuration(inst.config, comments);
    if (!f) throw cfp::IoError("write failed for " + a.output);
    return 0;
}

struct SolveArgs {
    std::string alg;
    std::optional<long> cap;
    bool no_normalize = false;
    std::string init = "first";
    std::optional<std::uint64_t> seed;
    bool no_trace = false;
    std::string file;
};

int run_solve(const SolveArgs& a)
{
    const auto alg = as_usage([&] { return cfp::parse_algorithm(a.alg); });
    cfp::SolveOptions opt;
    opt.cap = a.cap;
    opt.normalize = !a.no_normalize;
    if (a.init == "first") opt.init = cfp::InitHeuristic::FirstPoints;
    else if (a.init == "a4") opt.init = cfp::InitHeuristic::A4FirstIteration;
    else throw cfp::UsageError("--init must be 'first' or 'a4'");
    opt.seed = a.seed.value_or(env_seed());
    opt.record_trace = !a.no_trace;
    const auto config = cfp::load_configuration(a.file);
    const auto out = cfp::solve(config, alg, opt);

    json j;
    j["algorithm"] = cfp::to_string(alg);
    j["status"] = cfp::to_string(out.status);
    j["iterations"] = out.iterations;
    if (out.certificate) {
        j["simplex"] = selection_json(out.certificate->simplex);
        j["weights"] = vector_json(out.certificate->weights);
        j["original_weights"] = vector_json(out.certificate->original_weights);
    } else {
        j["simplex"] = selection_json(out.trace.simplices.empty() ? cfp::ColourfulSimplex{} : out.trace.simplices.back());
        j["weights"] = nullptr;
        j["original_weights"] = nullptr;
    }
    j["degenerate_checks"] = out.degenerate_checks;
    j["rescue_steps"] = out.rescue_steps;
    j["total_seconds"] = out.total_seconds;
    j["seconds_per_iteration"] = out.seconds_per_iteration;
    if (!out.message.empty()) j["message"] = out.message;
    if (opt.record_trace) {
        json t = json::array();
        for (std::size_t k = 0; k < out.trace.size(); ++k)
            t.push_back({{"simplex", selection_json(out.trace.simplices[k])}, {"scalar", scalar_json(out.trace.scalars[k])}});
        j["trace"] = std::move(t);
    }
    std::cout << j.dump(2) << "\n";
    switch (out.status) {
    case cfp::SolveStatus::Solved: return 0;
    case cfp::SolveStatus::Unstable: return kExitUnstable;
    case cfp::SolveStatus::CapExceeded: return kExitCap;
    }
    return 0;
}

int run_oracle(const std::string& file, std::size_t list)
{
    const auto config = cfp::load_configuration(file);
    const auto report = cfp::count_containing(config, list);
    json j;
    j["d"] = report.d;
    j["total"] = report.total;
    j["containing"] = report.containing;
    j["degenerate"] = report.degenerate;
    j["expected_a7"] = report.containing > 0 ? json(cfp::expected_a7_iterations(report)) : json(nullptr);
    if (list > 0) {
        json s = json::array();
        for (const auto& sol : report.solutions) s.push_back(selection_json(sol));
        j["solutions"] = std::move(s);
    }
    std::cout << j.dump(2) << "\n";
    return 0;
}

int run_bench(cfp::PlanArgs args, const std::string& dir)
{
    if (!args.seed) {
        const auto s = env_seed();
        if (std::getenv("CFP_SEED")) args.seed = s;
    }
    const auto plan = cfp::parse_plan(args);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw cfp::IoError("cannot create output directory " + dir + ": " + ec.message());

    cfp::RunEnvironment env;
    env.start = std::chrono::system_clock::now();
    const auto records = cfp::run_experiment(plan);
    env.end = std::chrono::system_clock::now();

    cfp::emit_csv(records, dir + "/results.csv");
    cfp::emit_manifest(plan, env, dir + "/manifest.json");
    cfp::emit_plot_data(records, dir);
    std::cerr << "wrote " << records.size() << " cells to " << dir << "/results.csv\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Colourful feasibility solvers, generators and benchmark harness"};
    app.require_subcommand(1);

    GenArgs gen;
    auto* gen_cmd = app.add_subcommand("gen", "Generate a configuration file");
    gen_cmd->add_option("--kind", gen.kind, "Generator g1..g6")->required();
    gen_cmd->add_option("--d", gen.d, "Dimension")->required();
    gen_cmd->add_option("--theta", gen.theta, "Cap half-angle in radians (G2, G3, G6)");
    gen_cmd->add_option("--eps", gen.epsilon, "Perturbation radius in radians (G4, G5)");
    gen_cmd->add_option("--seed", gen.seed, "Seed (default: CFP_SEED or 0)");
    gen_cmd->add_option("-o,--output", gen.output, "Output file")->required();

    SolveArgs sol;
    auto* solve_cmd = app.add_subcommand("solve", "Solve a configuration file and print JSON");
    solve_cmd->add_option("--alg", sol.alg, "Algorithm a1..a7")->required();
    solve_cmd->add_option("--cap", sol.cap, "Iteration cap")->check(CLI::PositiveNumber);
    solve_cmd->add_flag("--no-normalize", sol.no_normalize, "Skip projection onto the unit sphere");
    solve_cmd->add_option("--init", sol.init, "Initial simplex: first or a4");
    solve_cmd->add_option("--seed", sol.seed, "Seed for A7 (default: CFP_SEED or 0)");
    solve_cmd->add_flag("--no-trace", sol.no_trace, "Omit the per-iteration trace");
    solve_cmd->add_option("file", sol.file, "Configuration file")->required();

    std::string oracle_file;
    std::size_t oracle_list = 0;
    auto* oracle_cmd = app.add_subcommand("oracle", "Count colourful simplices containing the origin");
    oracle_cmd->add_option("file", oracle_file, "Configuration file")->required();
    oracle_cmd->add_option("--list", oracle_list, "Also list up to N solutions");

    cfp::PlanArgs plan;
    std::string out_dir;
    std::optional<int> jobs;
    auto* bench_cmd = app.add_subcommand("bench", "Run an experiment plan");
    bench_cmd->add_option("--plan", plan.plan_file, "JSON plan file");
    bench_cmd->add_option("--gens", plan.gens, "Comma-separated generators, e.g. g1,g5");
    bench_cmd->add_option("--algs", plan.algs, "Comma-separated algorithms, e.g. a1,a3");
    bench_cmd->add_option("--dims", plan.dims, "Comma-separated dimensions");
    bench_cmd->add_option("--samples", plan.samples, "Samples per dimension, e.g. d3=1000,d6=500 or 100");
    bench_cmd->add_option("--seed", plan.seed, "Master seed (default: CFP_SEED or 0)");
    bench_cmd->add_option("--jobs", jobs, "Worker threads");
    bench_cmd->add_flag("--force", plan.force, "Run cells skipped by default");
    bench_cmd->add_flag("--no-timing", plan.no_timing, "Write 0 in the time column");
    bench_cmd->add_flag("--no-normalize", plan.no_normalize, "Skip normalization");
    bench_cmd->add_option("-o,--output", out_dir, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*gen_cmd) return run_gen(gen);
        if (*solve_cmd) return run_solve(sol);
        if (*oracle_cmd) return run_oracle(oracle_file, oracle_list);
        if (*bench_cmd) {
            plan.jobs = jobs;
            return run_bench(plan, out_dir);
        }
    } catch (const cfp::UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const cfp::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const cfp::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const cfp::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitUsage;
}
