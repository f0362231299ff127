#include "catch_amalgamated.hpp"

#include "oracles.hpp"
#include "support.hpp"

using namespace cfp;
using namespace cfp::test;
using Catch::Approx;

namespace {

std::uint64_t facet_sign_count(const ColourConfiguration& c)
{
    std::uint64_t n = 0;
    std::vector<int> sel(static_cast<std::size_t>(c.d + 1), 0);
    do n += facet_sign_contains(c.simplex(ColourfulSimplex(sel)));
    while (detail::next_selection(sel, c.d + 1));
    return n;
}

ColourConfiguration same_triangle()
{
    const double s = std::sqrt(3.0) / 2.0;
    Matrix t(2, 3);
    t << 0, -s, s, 1, -0.5, -0.5;
    return {2, {t, t, t}, true};
}

}  // namespace

TEST_CASE("three copies of a regular triangle have 6 containing simplices")
{
    auto r = count_containing(same_triangle());
    CHECK(r.total == 27);
    CHECK(r.containing == 6);
    CHECK(r.degenerate == 21 - 0);  // every non-bijection repeats a vertex
    for (const auto& s : r.solutions) {
        std::vector<int> v = s.selection;
        std::sort(v.begin(), v.end());
        CHECK(v == std::vector<int>{0, 1, 2});
    }
    CHECK(expected_a7_iterations(r) == Approx(4.5));
}

TEST_CASE("d=1 toy")
{
    Matrix c(1, 2);
    c << -1, 1;
    auto r = count_containing(ColourConfiguration(1, {c, c}, true));
    CHECK(r.total == 4);
    CHECK(r.containing == 2);
    CHECK(expected_a7_iterations(r) == 2.0);
}

TEST_CASE("ZeroSolutions")
{
    DepthReport r;
    r.total = 8;
    CHECK_THROWS_AS(expected_a7_iterations(r), ZeroSolutions);
}

TEST_CASE("enumeration order, listing cap and cross-check")
{
    auto g = gen_g4(spec(GeneratorKind::G4, 2, 7));
    auto r = count_containing(g, 4);
    CHECK(r.containing == 9);
    CHECK(r.solutions.size() == 4);
    CHECK(facet_sign_count(g) == 9);
    CHECK(expected_a7_iterations(r) == 3.0);
    auto full = count_containing(g);
    CHECK(full.solutions.size() == 9);
    CHECK(std::is_sorted(full.solutions.begin(), full.solutions.end(),
                         [](const auto& a, const auto& b) { return a.selection < b.selection; }));
    for (const auto& s : full.solutions) CHECK(barycentric_containment(g.simplex(s)).contains());
}

TEST_CASE("count_through partitions the count")
{
    auto g = gen_g1(spec(GeneratorKind::G1, 3, 2));
    auto r = count_containing(g, 0);
    for (int colour = 0; colour <= 3; ++colour) {
        std::uint64_t sum = 0;
        for (int j = 0; j <= 3; ++j) sum += count_through(g, colour, j).containing;
        CHECK(sum == r.containing);
    }
}

TEST_CASE("G1 counts meet the quadratic floor and agree with facet signs")
{
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        for (int d : {2, 3, 4}) {
            auto g = gen_g1(spec(GeneratorKind::G1, d, seed));
            auto r = count_containing(g, 0);
            REQUIRE(r.containing >= static_cast<std::uint64_t>(d * d + 1));
            if (d <= 3) REQUIRE(facet_sign_count(g) == r.containing);
        }
    }
}

TEST_CASE("Monte Carlo sampling agrees with the exact count")
{
    auto g = gen_g1(spec(GeneratorKind::G1, 4, 5));
    auto r = count_containing(g, 0);
    const double p = static_cast<double>(r.containing) / static_cast<double>(r.total);
    RngStream rng(9);
    const int n = 100000;
    int hits = 0;
    ColourfulSimplex s = ColourfulSimplex::first_points(4);
    for (int k = 0; k < n; ++k) {
        for (int i = 0; i <= 4; ++i) s[static_cast<std::size_t>(i)] = static_cast<int>(rng.uniform_index(5));
        hits += barycentric_containment(g.simplex(s)).contains();
    }
    CHECK(std::abs(static_cast<double>(hits) / n - p) <= 3 * std::sqrt(p * (1 - p) / n));
}

TEST_CASE("A7 mean iterations match the oracle expectation")
{
    for (std::uint64_t seed : {1u, 2u}) {
        auto g = gen_g1(spec(GeneratorKind::G1, 3, seed));
        auto r = count_containing(g, 0);
        if (barycentric_containment(g.simplex(ColourfulSimplex::first_points(3))).contains()) continue;
        // each sample succeeds with probability q; the count of samples is geometric with mean 1/q
        const double q = static_cast<double>(r.containing) / static_cast<double>(r.total);
        const int runs = 1000;
        double sum = 0.0;
        for (int k = 0; k < runs; ++k) {
            SolveOptions o;
            o.seed = static_cast<std::uint64_t>(k);
            o.record_trace = false;
            sum += static_cast<double>(solve(g, Algorithm::A7, o).iterations);
        }
        const double sd = std::sqrt((1 - q) / (q * q) / runs);
        CHECK(std::abs(sum / runs - expected_a7_iterations(r)) <= 3 * sd);
    }
}
