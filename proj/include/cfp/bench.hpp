#pragma once

// Experiment harness: a plan names generators, algorithms, dimensions and
// sample counts; every algorithm in a row runs on the same instances; results
// are folded per cell in trial order, so the CSV does not depend on how many
// worker threads ran the trials.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

#include "cfp/generators.hpp"
#include "cfp/solvers.hpp"

namespace cfp {

inline constexpr const char* kVersion = "0.1.0";

class UsageError : public Error {
  public:
    using Error::Error;
};

struct GeneratorParams {
    GeneratorKind kind = GeneratorKind::G1;
    double theta = std::numbers::pi / 6.0;
    double epsilon = 0.01;
};

struct ExperimentPlan {
    std::vector<GeneratorParams> generators;
    std::vector<Algorithm> algorithms;
    std::vector<int> dims;
    std::map<int, long> samples;       // overrides of the default sample ladder
    std::map<Algorithm, long> caps;    // overrides of default_cap
    std::uint64_t master_seed = 0;
    bool normalize = true;
    int jobs = 1;
    bool force = false;   // run cells the default ladder skips
    bool timing = true;   // false writes 0 in the time column

    static ExperimentPlan defaults()
    {
        ExperimentPlan p;
        for (auto k : kAllGenerators) p.generators.push_back({k});
        p.algorithms.assign(std::begin(kAllAlgorithms), std::end(kAllAlgorithms));
        for (int n = 0; n <= 7; ++n) p.dims.push_back(3 << n);
        return p;
    }

    long samples_for(int d) const
    {
        if (auto it = samples.find(d); it != samples.end()) return it->second;
        if (d <= 3) return 100000;
        if (d <= 12) return 10000;
        if (d <= 48) return 1000;
        return 100;
    }

    long cap_for(Algorithm a, int d) const
    {
        if (auto it = caps.find(a); it != caps.end()) return it->second;
        return default_cap(a, d);
    }

    /// Cells the paper reports as unstable or "Large" are skipped unless forced.
    bool cell_enabled(GeneratorKind g, Algorithm a, int d) const
    {
        if (force) return true;
        const bool nearest_or_volume =
            a == Algorithm::A1 || a == Algorithm::A3 || a == Algorithm::A5 || a == Algorithm::A6;
        if (nearest_or_volume && d > 96) return false;
        if (a == Algorithm::A7 && d > 12 && g != GeneratorKind::G4) return false;
        return true;
    }

    void validate() const
    {
        if (generators.empty()) throw UsageError("plan has no generators");
        if (algorithms.empty()) throw UsageError("plan has no algorithms");
        if (dims.empty()) throw UsageError("plan has no dimensions");
        for (int d : dims)
            if (d < 2) throw UsageError("dimensions must be at least 2, got " + std::to_string(d));
        for (auto& [d, n] : samples)
            if (n < 1) throw UsageError("sample count for d=" + std::to_string(d) + " must be positive");
        for (auto& [a, c] : caps)
            if (c < 1) throw UsageError("cap for " + to_string(a) + " must be positive");
        if (jobs < 1) throw UsageError("jobs must be positive");
        for (const auto& g : generators) {
            GeneratorSpec s{g.kind, 3, g.theta, g.epsilon, 0};
            try {
                s.validate();
            } catch (const Error& e) {
                throw UsageError(e.what());
            }
        }
    }

    nlohmann::json to_json() const
    {
        nlohmann::json j;
        j["generators"] = nlohmann::json::array();
        for (const auto& g : generators)
            j["generators"].push_back({{"kind", to_string(g.kind)}, {"theta", g.theta}, {"epsilon", g.epsilon}});
        j["algorithms"] = nlohmann::json::array();
        for (auto a : algorithms) j["algorithms"].push_back(to_string(a));
        j["dims"] = dims;
        nlohmann::json s = nlohmann::json::object();
        for (int d : dims) s[std::to_string(d)] = samples_for(d);
        j["samples"] = s;
        nlohmann::json c = nlohmann::json::object();
        for (auto a : algorithms) {
            nlohmann::json per = nlohmann::json::object();
            for (int d : dims) per[std::to_string(d)] = cap_for(a, d);
            c[to_string(a)] = per;
        }
        j["caps"] = c;
        j["master_seed"] = master_seed;
        j["normalize"] = normalize;
        j["jobs"] = jobs;
        j["force"] = force;
        j["timing"] = timing;
        return j;
    }
};

struct BenchRecord {
    GeneratorKind generator = GeneratorKind::G1;
    Algorithm algorithm = Algorithm::A1;
    int d = 0;
    long samples = 0;
    double avg_iterations = 0.0;
    long max_iterations = 0;
    double avg_iteration_time_seconds = 0.0;
    long unstable = 0;
    long cap_exceeded = 0;
};

/// One solve inside run_experiment, reported to the optional observer.
struct TrialInfo {
    GeneratorKind generator;
    int d;
    long trial;
    Algorithm algorithm;
    std::uint64_t instance_fingerprint;
    SolveStatus status;
    long iterations;
};

using TrialObserver = std::function<void(const TrialInfo&)>;

/// Seed of trial `trial` in row (generator, d).
inline std::uint64_t trial_seed(std::uint64_t master, GeneratorKind g, int d, long trial)
{
    return RngStream(master)
        .split(to_string(g))
        .split(static_cast<std::uint64_t>(d))
        .split(static_cast<std::uint64_t>(trial))
        .next_u64();
}

namespace detail {

struct TrialResult {
    SolveStatus status = SolveStatus::Unstable;
    long iterations = 0;
    double seconds = 0.0;
};

template <class F>
void parallel_for(long n, int jobs, F&& body)
{
    if (jobs <= 1 || n <= 1) {
        for (long i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<long> next{0};
    std::vector<std::thread> pool;
    const int workers = static_cast<int>(std::min<long>(jobs, n));
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&]() {
            for (long i = next++; i < n; i = next++) body(i);
        });
    for (auto& t : pool) t.join();
}

}  // namespace detail

inline std::vector<BenchRecord> run_experiment(const ExperimentPlan& plan, const TrialObserver& observer = {})
{
    plan.validate();
    std::vector<BenchRecord> records;
    std::mutex observer_mutex;

    for (const auto& gen : plan.generators) {
        for (int d : plan.dims) {
            std::vector<Algorithm> algs;
            for (auto a : plan.algorithms)
                if (plan.cell_enabled(gen.kind, a, d)) algs.push_back(a);
            if (algs.empty()) continue;
            const long n = plan.samples_for(d);
            // results[trial * algs + k]
            std::vector<detail::TrialResult> results(static_cast<std::size_t>(n) * algs.size());

            detail::parallel_for(n, plan.jobs, [&](long trial) {
                const std::uint64_t seed = trial_seed(plan.master_seed, gen.kind, d, trial);
                std::optional<ColourConfiguration> config;
                try {
                    config = generate(GeneratorSpec{gen.kind, d, gen.theta, gen.epsilon, seed}).config;
                } catch (const Error&) {
                    // Generation failure: every algorithm's trial counts as unstable.
                }
                const std::uint64_t fp = config ? config->fingerprint() : 0;
                for (std::size_t k = 0; k < algs.size(); ++k) {
                    auto& r = results[static_cast<std::size_t>(trial) * algs.size() + k];
                    if (config) {
                        SolveOptions opt;
                        opt.cap = plan.cap_for(algs[k], d);
                        opt.normalize = plan.normalize;
                        opt.seed = seed;
                        opt.record_trace = false;
                        const SolveOutcome out = solve(*config, algs[k], opt);
                        r = {out.status, out.iterations, out.total_seconds};
                    }
                    if (observer) {
                        std::lock_guard lock(observer_mutex);
                        observer(TrialInfo{gen.kind, d, trial, algs[k], fp, r.status, r.iterations});
                    }
                }
            });

            for (std::size_t k = 0; k < algs.size(); ++k) {
                BenchRecord rec;
                rec.generator = gen.kind;
                rec.algorithm = algs[k];
                rec.d = d;
                rec.samples = n;
                long solved = 0;
                long total_iters = 0;
                double total_seconds = 0.0;
                for (long t = 0; t < n; ++t) {
                    const auto& r = results[static_cast<std::size_t>(t) * algs.size() + k];
                    switch (r.status) {
                    case SolveStatus::Solved:
                        ++solved;
                        total_iters += r.iterations;
                        total_seconds += r.seconds;
                        rec.max_iterations = std::max(rec.max_iterations, r.iterations);
                        break;
                    case SolveStatus::Unstable: ++rec.unstable; break;
                    case SolveStatus::CapExceeded: ++rec.cap_exceeded; break;
                    }
                }
                rec.avg_iterations = solved > 0 ? static_cast<double>(total_iters) / static_cast<double>(solved) : 0.0;
                if (plan.timing && total_iters > 0) rec.avg_iteration_time_seconds = total_seconds / static_cast<double>(total_iters);
                records.push_back(rec);
            }
        }
    }
    std::sort(records.begin(), records.end(), [](const BenchRecord& a, const BenchRecord& b) {
        if (a.generator != b.generator) return a.generator < b.generator;
        if (a.d != b.d) return a.d < b.d;
        return a.algorithm < b.algorithm;
    });
    return records;
}

inline std::string csv_text(const std::vector<BenchRecord>& records)
{
    std::string out = "generator,algorithm,d,samples,avg_iters,max_iters,avg_iter_time_s,unstable,cap_exceeded\n";
    char buf[256];
    for (const auto& r : records) {
        std::snprintf(buf, sizeof buf, "%s,%s,%d,%ld,%.6f,%ld,%.9g,%ld,%ld\n", to_string(r.generator).c_str(),
                      to_string(r.algorithm).c_str(), r.d, r.samples, r.avg_iterations, r.max_iterations,
                      r.avg_iteration_time_seconds, r.unstable, r.cap_exceeded);
        out += buf;
    }
    return out;
}

namespace detail {

inline void write_file(const std::string& path, const std::string& content)
{
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open " + path + " for writing");
    f << content;
    if (!f) throw IoError("write failed for " + path);
}

inline std::string utc_timestamp(std::chrono::system_clock::time_point t)
{
    const std::time_t tt = std::chrono::system_clock::to_time_t(t);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace detail

inline void emit_csv(const std::vector<BenchRecord>& records, const std::string& path)
{
    detail::write_file(path, csv_text(records));
}

struct RunEnvironment {
    std::chrono::system_clock::time_point start;
    std::chrono::system_clock::time_point end;
};

inline nlohmann::json manifest_json(const ExperimentPlan& plan, const RunEnvironment& env)
{
    nlohmann::json j;
    j["version"] = kVersion;
    j["plan"] = plan.to_json();
    j["seeds"] = {{"master_seed", plan.master_seed},
                  {"derivation", "RngStream(master).split(generator).split(d).split(trial).next_u64()"}};
    j["start"] = detail::utc_timestamp(env.start);
    j["end"] = detail::utc_timestamp(env.end);
    j["hardware_threads"] = std::thread::hardware_concurrency();
    return j;
}

inline void emit_manifest(const ExperimentPlan& plan, const RunEnvironment& env, const std::string& path)
{
    detail::write_file(path, manifest_json(plan, env).dump(2) + "\n");
}

/// Per-generator (log2 d, log2 avg_iters) blocks, one per algorithm, separated by blank lines.
inline std::map<GeneratorKind, std::string> plot_data(const std::vector<BenchRecord>& records)
{
    std::map<GeneratorKind, std::map<Algorithm, std::vector<const BenchRecord*>>> grouped;
    for (const auto& r : records) grouped[r.generator][r.algorithm].push_back(&r);
    std::map<GeneratorKind, std::string> out;
    char buf[96];
    for (auto& [g, by_alg] : grouped) {
        std::string text = "# log2(d) log2(avg_iters)\n";
        bool first = true;
        for (auto& [a, rows] : by_alg) {
            if (!first) text += "\n\n";
            first = false;
            text += "# " + to_string(a) + "\n";
            for (const auto* r : rows) {
                if (!(r->avg_iterations > 0.0)) continue;
                std::snprintf(buf, sizeof buf, "%.6f %.6f\n", std::log2(static_cast<double>(r->d)), std::log2(r->avg_iterations));
                text += buf;
            }
        }
        out[g] = std::move(text);
    }
    return out;
}

inline void emit_plot_data(const std::vector<BenchRecord>& records, const std::string& dir)
{
    for (auto& [g, text] : plot_data(records)) {
        std::string name = to_string(g);
        std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) { return std::tolower(c); });
        detail::write_file(dir + "/plot_" + name + ".dat", text);
    }
}

// ---------------------------------------------------------------------------
// Plan resolution: defaults, then an optional JSON plan file, then flags.
// ---------------------------------------------------------------------------

struct PlanArgs {
    std::optional<std::string> plan_file;
    std::optional<std::string> gens;
    std::optional<std::string> algs;
    std::optional<std::string> dims;
    std::optional<std::string> samples;
    std::optional<std::uint64_t> seed;
    std::optional<int> jobs;
    bool force = false;
    bool no_timing = false;
    bool no_normalize = false;
};

namespace detail {

inline std::vector<std::string> split_list(const std::string& s)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

inline long parse_long(const std::string& s, const std::string& what)
{
    std::size_t used = 0;
    long v = 0;
    try {
        v = std::stol(s, &used);
    } catch (const std::exception&) {
        throw UsageError("invalid " + what + " '" + s + "'");
    }
    if (used != s.size()) throw UsageError("invalid " + what + " '" + s + "'");
    return v;
}

inline std::vector<GeneratorParams> parse_gens(const std::string& s)
{
    std::vector<GeneratorParams> out;
    for (const auto& g : split_list(s)) {
        try {
            out.push_back({parse_generator(g)});
        } catch (const Error& e) {
            throw UsageError(e.what());
        }
    }
    return out;
}

inline std::vector<Algorithm> parse_algs(const std::string& s)
{
    std::vector<Algorithm> out;
    for (const auto& a : split_list(s)) {
        try {
            out.push_back(parse_algorithm(a));
        } catch (const Error& e) {
            throw UsageError(e.what());
        }
    }
    return out;
}

inline std::vector<int> parse_dims(const std::string& s)
{
    std::vector<int> out;
    for (const auto& d : split_list(s)) {
        const long v = parse_long(d, "dimension");
        if (v < 2 || v > 100000) throw UsageError("dimension must be at least 2, got '" + d + "'");
        out.push_back(static_cast<int>(v));
    }
    return out;
}

/// "d3=1000,d6=500" sets per-dimension counts; a bare number applies to every dimension in `dims`.
inline void apply_samples(const std::string& s, const std::vector<int>& dims, std::map<int, long>& samples)
{
    for (const auto& item : split_list(s)) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) {
            const long n = parse_long(item, "sample count");
            if (n < 1) throw UsageError("sample count must be positive");
            for (int d : dims) samples[d] = n;
            continue;
        }
        std::string key = item.substr(0, eq);
        if (!key.empty() && (key[0] == 'd' || key[0] == 'D')) key = key.substr(1);
        const long d = parse_long(key, "sample dimension");
        const long n = parse_long(item.substr(eq + 1), "sample count");
        if (n < 1) throw UsageError("sample count must be positive");
        samples[static_cast<int>(d)] = n;
    }
}

inline void apply_plan_json(const nlohmann::json& j, ExperimentPlan& plan)
{
    if (!j.is_object()) throw UsageError("plan file must hold a JSON object");
    static const char* known[] = {"generators", "algorithms", "dims", "samples", "caps",
                                  "seed", "master_seed", "jobs", "normalize", "force", "timing"};
    for (auto it = j.begin(); it != j.end(); ++it)
        if (std::find_if(std::begin(known), std::end(known), [&](const char* k) { return it.key() == k; }) == std::end(known))
            throw UsageError("unknown plan key '" + it.key() + "'");
    try {
        if (j.contains("generators")) {
            plan.generators.clear();
            for (const auto& g : j["generators"]) {
                if (g.is_string()) {
                    plan.generators.push_back({parse_generator(g.get<std::string>())});
                } else {
                    GeneratorParams p{parse_generator(g.at("kind").get<std::string>())};
                    if (g.contains("theta")) p.theta = g["theta"].get<double>();
                    if (g.contains("epsilon")) p.epsilon = g["epsilon"].get<double>();
                    plan.generators.push_back(p);
                }
            }
        }
        if (j.contains("algorithms")) {
            plan.algorithms.clear();
            for (const auto& a : j["algorithms"]) plan.algorithms.push_back(parse_algorithm(a.get<std::string>()));
        }
        if (j.contains("dims")) plan.dims = j["dims"].get<std::vector<int>>();
        if (j.contains("samples")) {
            for (auto it = j["samples"].begin(); it != j["samples"].end(); ++it) {
                std::string key = it.key();
                if (!key.empty() && (key[0] == 'd' || key[0] == 'D')) key = key.substr(1);
                plan.samples[static_cast<int>(parse_long(key, "sample dimension"))] = it.value().get<long>();
            }
        }
        if (j.contains("caps"))
            for (auto it = j["caps"].begin(); it != j["caps"].end(); ++it)
                plan.caps[parse_algorithm(it.key())] = it.value().get<long>();
        if (j.contains("seed")) plan.master_seed = j["seed"].get<std::uint64_t>();
        if (j.contains("master_seed")) plan.master_seed = j["master_seed"].get<std::uint64_t>();
        if (j.contains("jobs")) plan.jobs = j["jobs"].get<int>();
        if (j.contains("normalize")) plan.normalize = j["normalize"].get<bool>();
        if (j.contains("force")) plan.force = j["force"].get<bool>();
        if (j.contains("timing")) plan.timing = j["timing"].get<bool>();
    } catch (const UsageError&) {
        throw;
    } catch (const std::exception& e) {
        throw UsageError(std::string("invalid plan file: ") + e.what());
    }
}

}  // namespace detail

inline ExperimentPlan parse_plan(const PlanArgs& args)
{
    ExperimentPlan plan = ExperimentPlan::defaults();
    if (args.plan_file) {
        std::ifstream f(*args.plan_file);
        if (!f) throw IoError("cannot open plan file " + *args.plan_file);
        nlohmann::json j;
        try {
            f >> j;
        } catch (const std::exception& e) {
            throw UsageError("plan file " + *args.plan_file + " is not valid JSON: " + e.what());
        }
        detail::apply_plan_json(j, plan);
    }
    if (args.gens) plan.generators = detail::parse_gens(*args.gens);
    if (args.algs) plan.algorithms = detail::parse_algs(*args.algs);
    if (args.dims) plan.dims = detail::parse_dims(*args.dims);
    if (args.samples) detail::apply_samples(*args.samples, plan.dims, plan.samples);
    if (args.seed) plan.master_seed = *args.seed;
    if (args.jobs) plan.jobs = *args.jobs;
    if (args.force) plan.force = true;
    if (args.no_timing) plan.timing = false;
    if (args.no_normalize) plan.normalize = false;
    plan.validate();
    return plan;
}

}  // namespace cfp
