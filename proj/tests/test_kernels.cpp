#include "catch_amalgamated.hpp"

#include "oracles.hpp"
#include "support.hpp"

using namespace cfp;
using namespace cfp::test;
using Catch::Approx;

namespace {

double cayley_menger_volume(const Matrix& v)
{
    using LMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
    const int n = static_cast<int>(v.cols());
    const int d = n - 1;
    LMatrix cm = LMatrix::Ones(n + 1, n + 1);
    cm(0, 0) = 0.0L;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) cm(a + 1, b + 1) = (v.col(a) - v.col(b)).cast<long double>().squaredNorm();
    long double fact = 1.0L;
    for (int k = 2; k <= d; ++k) fact *= k;
    const long double sign = (d + 1) % 2 == 0 ? 1.0L : -1.0L;
    const long double v2 = sign * cm.fullPivLu().determinant() / (std::pow(2.0L, d) * fact * fact);
    return static_cast<double>(std::sqrt(std::max(0.0L, v2)));
}

Matrix triangle() { return cols({{1, 0}, {0, 1}, {-1, -1}}); }

}  // namespace

TEST_CASE("containment on simple triangles")
{
    const double s = std::sqrt(3.0) / 2.0;
    auto c = barycentric_containment(cols({{0, 1}, {-s, -0.5}, {s, -0.5}}));
    REQUIRE(c.contains());
    for (int k = 0; k < 3; ++k) CHECK(c.lambda(k) == Approx(1.0 / 3.0).margin(1e-12));

    CHECK(barycentric_containment(cols({{1, 0}, {0, 1}, {1, 1}})).kind == Containment::NotContained);
    CHECK(barycentric_containment(cols({{1, 0}, {2, 0}, {3, 0}})).kind == Containment::Degenerate);
}

TEST_CASE("containment on the Appendix B fixture")
{
    auto b = load_configuration(fixture("appendix_b.cfg"));
    CHECK(barycentric_containment(b.simplex(ColourfulSimplex::from_string("(4,3,2,2)"))).contains());
    CHECK(barycentric_containment(b.simplex(ColourfulSimplex::from_string("(1,1,1,1)"))).kind ==
          Containment::NotContained);
}

TEST_CASE("nearest point: containing simplex gives the origin")
{
    const double s = std::sqrt(3.0) / 2.0;
    auto r = nearest_point_simplex(cols({{0, 1}, {-s, -0.5}, {s, -0.5}}));
    CHECK(r.distance <= 1e-12);
    CHECK(r.lambda.sum() == Approx(1.0));
}

TEST_CASE("nearest point: perpendicular foot on a segment")
{
    auto r = nearest_point_hull(cols({{1, 1}, {1, -1}}));
    CHECK(r.distance == Approx(1.0));
    CHECK(r.x(0) == Approx(1.0));
    CHECK(r.x(1) == Approx(0.0).margin(1e-12));
    CHECK(r.lambda(0) == Approx(0.5));
}

TEST_CASE("nearest point matches face enumeration on Appendix A")
{
    auto a = load_configuration(fixture("appendix_a.cfg"));
    const Matrix v = a.simplex(ColourfulSimplex::first_points(4));
    auto r = nearest_point_simplex(v);
    CHECK(std::abs(r.distance - face_enumeration_distance(v)) <= 1e-8);
}

TEST_CASE("nearest point property: optimality and agreement with face enumeration")
{
    RngStream rng(42);
    for (int trial = 0; trial < 1500; ++trial) {
        const int d = 2 + trial % 3;
        Matrix v = trial % 2 ? sphere_points(d, d + 1, rng) : Matrix(gaussian(d, d + 1, rng).array() + 0.7);
        auto r = nearest_point_simplex(v);
        REQUIRE((r.lambda.array() >= -1e-9).all());
        REQUIRE(std::abs(r.lambda.sum() - 1.0) <= 1e-9);
        REQUIRE((v * r.lambda - r.x).norm() <= 1e-8);
        for (int k = 0; k <= d; ++k) REQUIRE((v.col(k) - r.x).dot(r.x) >= -1e-7);
        REQUIRE(std::abs(r.distance - face_enumeration_distance(v)) <= 1e-8);
        for (int k : r.support) REQUIRE(r.lambda(k) > 1e-9);
    }
}

TEST_CASE("facet system of a triangle")
{
    auto fs = facet_system(triangle());
    // the edge opposite (-1,-1) is x + y <= 1, i.e. -(x+y) >= -1 up to scale
    const double scale = -fs.A(2, 0);
    CHECK(scale > 0);
    CHECK(fs.A(2, 1) == Approx(-scale));
    CHECK(fs.b(2) == Approx(-scale));
    for (int k = 0; k < 3; ++k) CHECK(fs.barycentric(triangle().col(k))(k) == Approx(1.0));
}

TEST_CASE("facet system: vertices satisfy every row")
{
    RngStream rng(8);
    for (int trial = 0; trial < 200; ++trial) {
        Matrix v = gaussian(5, 6, rng);
        auto fs = facet_system(v);
        for (int k = 0; k < 6; ++k) {
            Vector s = fs.A * v.col(k) - fs.b;
            REQUIRE(s.minCoeff() >= -1e-8);
            REQUIRE(s(k) > 1e-8);
        }
    }
}

TEST_CASE("facet system rejects coplanar points")
{
    CHECK_THROWS_AS(facet_system(cols({{1, 0, 0}, {0, 1, 0}, {-1, -1, 0}, {0.3, 0.2, 0}})), DegenerateSimplex);
}

TEST_CASE("ray entry examples")
{
    auto fs = facet_system(triangle());
    auto e = ray_simplex_entry(fs, vec({2, 0}));
    CHECK(e.alpha == Approx(0.5));
    CHECK(e.y(0) == Approx(1.0));
    CHECK(e.y(1) == Approx(0.0).margin(1e-12));
    CHECK_THROWS_AS(ray_simplex_entry(fs, vec({0, 0})), DivisionDegenerate);

    // origin outside: the ray enters at the near facet
    auto far = facet_system(cols({{2, -1}, {2, 1}, {4, 0}}));
    auto f = ray_simplex_entry(far, vec({1, 0}));
    CHECK(f.alpha == Approx(2.0));
    CHECK_THROWS_AS(ray_simplex_entry(far, vec({-1, 0})), NoEntry);
}

TEST_CASE("ray entry agrees with bisection")
{
    RngStream rng(99);
    int tested = 0;
    while (tested < 1000) {
        const int d = 2 + tested % 5;
        Matrix v = sphere_points(d, d + 1, rng);
        if (!barycentric_containment(v).contains()) continue;
        // random interior point p
        Vector w(d + 1);
        for (int k = 0; k <= d; ++k) w(k) = rng.exponential();
        Vector p = v * (w / w.sum());
        if (p.norm() < 1e-6) continue;
        auto e = ray_simplex_entry(facet_system(v), p);
        const double lo = bisect_exit(v, p);
        REQUIRE(std::abs(e.alpha - lo) <= 1e-9 * std::max(1.0, lo));
        Vector slack = facet_system(v).barycentric(e.y);
        REQUIRE(slack.minCoeff() >= -1e-8);
        REQUIRE(std::abs(slack.minCoeff()) <= 1e-8);
        ++tested;
    }
}

TEST_CASE("ray entry from outside lands on the boundary")
{
    RngStream rng(5);
    int tested = 0;
    while (tested < 500) {
        const int d = 2 + tested % 4;
        Matrix v = gaussian(d, d + 1, rng);
        v = v.colwise() + Vector::Constant(d, 3.0);
        Vector w(d + 1);
        for (int k = 0; k <= d; ++k) w(k) = rng.exponential();
        Vector p = v * (w / w.sum());
        auto e = ray_simplex_entry(facet_system(v), p);
        Vector slack = facet_system(v).barycentric(e.y);
        REQUIRE(slack.minCoeff() >= -1e-8);
        REQUIRE(std::abs(slack.minCoeff()) <= 1e-8);
        REQUIRE(e.alpha <= 1.0 + 1e-12);
        // nothing on the segment before alpha is inside
        REQUIRE_FALSE(point_in_simplex(v, (e.alpha * 0.999) * p));
        ++tested;
    }
}

TEST_CASE("segment projection examples")
{
    auto a = project_onto_segment(vec({1, 1}), vec({1, -1}));
    CHECK(a.t == Approx(0.5));
    CHECK(a.point(1) == Approx(0.0).margin(1e-15));
    auto b = project_onto_segment(vec({2, 0}), vec({4, 0}));
    CHECK(b.t == 0.0);
    CHECK(b.point(0) == 2.0);
    auto c = project_onto_segment(vec({2, 0}), vec({2, 0}));
    CHECK(c.t == 0.0);
}

TEST_CASE("segment projection matches a grid search")
{
    RngStream rng(17);
    for (int trial = 0; trial < 5; ++trial) {
        Vector a = gaussian(6, 1, rng).col(0);
        Vector b = gaussian(6, 1, rng).col(0);
        auto r = project_onto_segment(a, b);
        double best_t = 0.0, best = std::numeric_limits<double>::infinity();
        const int steps = 1000000;
        for (int k = 0; k <= steps; ++k) {
            const double t = static_cast<double>(k) / steps;
            const double n = (a + t * (b - a)).squaredNorm();
            if (n < best) {
                best = n;
                best_t = t;
            }
        }
        CHECK(std::abs(r.t - best_t) <= 1e-5);
    }
}

TEST_CASE("min_inner_point")
{
    auto m = min_inner_point(cols({{1, 0}, {-1, 0}, {0, 1}}), vec({1, 0}));
    CHECK(m.index == 1);
    CHECK(m.value == -1.0);
    auto tie = min_inner_point(cols({{0, 1}, {-1, 0}, {-1, 5}}), vec({1, 0}));
    CHECK(tie.index == 1);
}

TEST_CASE("min_inner_point is non-positive on core colours")
{
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        auto g = gen_g1(spec(GeneratorKind::G1, 2 + static_cast<int>(seed % 6), seed));
        RngStream rng(seed);
        Vector dir = sample_sphere(g.d, rng);
        REQUIRE(min_inner_point(g.colour(static_cast<int>(seed % static_cast<std::uint64_t>(g.d + 1))), dir).value <= 1e-9);
    }
}

TEST_CASE("simplex volume")
{
    CHECK(simplex_volume(cols({{0, 0}, {1, 0}, {0, 1}})) == Approx(0.5));
    CHECK(simplex_volume(cols({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}})) == Approx(1.0 / 6.0));
    CHECK(simplex_volume(cols({{1, 0}, {2, 0}, {3, 0}})) == 0.0);
    RngStream rng(4);
    for (int trial = 0; trial < 200; ++trial) {
        Matrix v = gaussian(3, 4, rng);
        const double cm = cayley_menger_volume(v);
        const double vol = simplex_volume(v);
        // the Cayley-Menger determinant cancels terms of size (edge^2)^3, so its
        // error in V^2 scales with that, not with V^2
        double edge2 = 0.0;
        for (int a = 0; a < 4; ++a)
            for (int b = a + 1; b < 4; ++b) edge2 = std::max(edge2, (v.col(a) - v.col(b)).squaredNorm());
        CHECK(std::abs(vol * vol - cm * cm) <= 1e-14 * edge2 * edge2 * edge2);
        if (vol * vol > 1e-3 * edge2 * edge2 * edge2) CHECK(vol == Approx(cm).epsilon(1e-10));
    }
}

TEST_CASE("containment agrees with facet signs at the origin")
{
    RngStream rng(31);
    for (int d = 2; d <= 6; ++d) {
        for (int trial = 0; trial < 1000; ++trial) {
            Matrix v = sphere_points(d, d + 1, rng);
            auto c = barycentric_containment(v);
            if (c.kind == Containment::Degenerate) continue;
            auto fs = facet_system(v);
            const Vector at0 = -fs.b;
            if (std::abs(at0.minCoeff()) < 1e-9) continue;  // boundary band
            REQUIRE(c.contains() == (at0.minCoeff() >= 0.0));
            // volumes: sub-simplices through the origin add up exactly when it is inside
            if (c.contains()) {
                double total = 0.0;
                for (int k = 0; k <= d; ++k) {
                    Matrix s = v;
                    s.col(k).setZero();
                    total += simplex_volume(s);
                }
                REQUIRE(total == Approx(simplex_volume(v)).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("random simplices contain the origin with probability 2^-d")
{
    RngStream rng(2718);
    for (int d = 3; d <= 8; ++d) {
        const int n = 20000;
        int hits = 0;
        for (int k = 0; k < n; ++k) hits += barycentric_containment(sphere_points(d, d + 1, rng)).contains();
        const double p = std::ldexp(1.0, -d);
        const double sigma = std::sqrt(p * (1 - p) / n);
        CHECK(std::abs(static_cast<double>(hits) / n - p) <= 3.0 * sigma);
    }
}
