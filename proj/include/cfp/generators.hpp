#pragma once

/**
 * Seeded instance generators.
 *
 *   G1  random: d sphere points per colour plus a convex combination of their antipodes.
 *   G2  tube: per colour, 1 or d points (fair coin) in the cap around +e_d, the rest around -e_d.
 *   G3  tube: per colour, always d points around +e_d and one around -e_d.
 *   G4  d^(d+1)+1 solutions: colour i clusters near regular-simplex vertex u_i, closed near -u_i.
 *   G5  one point of every colour near each regular-simplex vertex.
 *   G6  few solutions: a tube instance locally searched down to d^2+1 solutions (d <= 3).
 *
 * All outputs are on the unit sphere and have the origin in the core.  The
 * stream for a spec is RngStream(seed).split(kind); attempt k of a retrying
 * generator uses a further split(k), so outputs never depend on scheduling.
 */

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "cfp/core.hpp"
#include "cfp/oracle.hpp"
#include "cfp/rng.hpp"
#include "cfp/types.hpp"

namespace cfp {

class DegenerateCombination : public Error {
  public:
    DegenerateCombination() : Error("antipodal combination collapsed to the origin after 100 redraws") {}
};

class CoreLost : public Error {
  public:
    explicit CoreLost(int attempts)
        : Error("core condition failed in " + std::to_string(attempts) + " regeneration attempts (epsilon too large?)")
    {
    }
};

class CountMismatch : public Error {
  public:
    CountMismatch(const std::string& what, int attempts)
        : Error(what + ": solution count target not reached after " + std::to_string(attempts) + " attempts")
    {
    }
};

enum class GeneratorKind { G1 = 1, G2, G3, G4, G5, G6 };

inline constexpr GeneratorKind kAllGenerators[] = {GeneratorKind::G1, GeneratorKind::G2, GeneratorKind::G3,
                                                   GeneratorKind::G4, GeneratorKind::G5, GeneratorKind::G6};

inline std::string to_string(GeneratorKind k) { return "G" + std::to_string(static_cast<int>(k)); }

inline GeneratorKind parse_generator(const std::string& text)
{
    if (text.size() == 2 && (text[0] == 'g' || text[0] == 'G') && text[1] >= '1' && text[1] <= '6')
        return static_cast<GeneratorKind>(text[1] - '0');
    throw Error("unknown generator '" + text + "' (expected g1..g6)");
}

struct GeneratorSpec {
    GeneratorKind kind = GeneratorKind::G1;
    int d = 3;
    double theta = std::numbers::pi / 6.0;
    double epsilon = 0.01;
    std::uint64_t seed = 0;

    void validate() const
    {
        if (d < 2) throw Error("generator dimension must be at least 2");
        if (!(theta > 0.0 && theta < std::numbers::pi / 2.0)) throw Error("theta must lie in (0, pi/2)");
        if (!(epsilon > 0.0 && epsilon < 0.1)) throw Error("epsilon must lie in (0, 0.1)");
    }
};

struct GeneratedInstance {
    ColourConfiguration config;
    bool count_verified = false;  // G4/G6 only: the oracle confirmed the target solution count
    int attempts = 1;
};

inline Vector sample_sphere(int d, RngStream& rng)
{
    Vector v(d);
    for (;;) {
        for (int k = 0; k < d; ++k) v(k) = rng.normal();
        const double n = v.norm();
        if (n >= 1e-8) return v / n;
    }
}

/// Normalized random convex combination of the antipodes of the given columns.
inline Vector antipodal_closure(const Matrix& points, RngStream& rng)
{
    for (int attempt = 0; attempt < 100; ++attempt) {
        Vector w(points.cols());
        for (Eigen::Index k = 0; k < w.size(); ++k) w(k) = rng.exponential();
        w /= w.sum();
        const Vector c = -(points * w);
        const double n = c.norm();
        if (n >= 1e-10) return c / n;
    }
    throw DegenerateCombination();
}

/**
 * Unit vector at angle phi = max_angle * u * w from `axis` (u, w uniform), in a
 * uniformly random tangent direction.  The product law concentrates points
 * toward the axis.
 */
inline Vector perturb_direction(const Vector& axis, double max_angle, RngStream& rng)
{
    const auto d = axis.size();
    if (d < 2) return axis;
    Vector t(d);
    for (;;) {
        for (Eigen::Index k = 0; k < d; ++k) t(k) = rng.normal();
        t -= axis.dot(t) * axis;
        const double n = t.norm();
        if (n >= 1e-8) {
            t /= n;
            break;
        }
    }
    const double phi = max_angle * rng.uniform() * rng.uniform();
    Vector out = std::cos(phi) * axis + std::sin(phi) * t;
    return out / out.norm();
}

inline Vector sample_cap(int d, int axis_sign, double theta, RngStream& rng)
{
    Vector axis = Vector::Zero(d);
    axis(d - 1) = axis_sign >= 0 ? 1.0 : -1.0;
    return perturb_direction(axis, theta, rng);
}

/// d+1 unit vectors in R^d with pairwise inner products -1/d and zero sum.
inline std::vector<Vector> regular_simplex_vertices(int d)
{
    const int n = d + 1;
    // Centred basis vectors of R^{d+1} lie in the hyperplane orthogonal to 1;
    // a Householder reflection takes that hyperplane onto the first d axes.
    Vector v = Vector::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
    v(n - 1) -= 1.0;
    const double vv = v.squaredNorm();
    std::vector<Vector> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        Vector e = Vector::Constant(n, -1.0 / n);
        e(i) += 1.0;
        e -= (2.0 * v.dot(e) / vv) * v;
        Vector u = e.head(d);
        out.push_back(u / u.norm());
    }
    return out;
}

namespace detail {

inline void shuffle_columns(Matrix& m, RngStream& rng)
{
    for (Eigen::Index k = m.cols() - 1; k > 0; --k) {
        const auto j = static_cast<Eigen::Index>(rng.uniform_index(static_cast<std::uint64_t>(k + 1)));
        if (j != k) m.col(k).swap(m.col(j));
    }
}

inline RngStream kind_stream(const GeneratorSpec& spec) { return RngStream(spec.seed).split(to_string(spec.kind)); }

/// d cap points on the side given by `sign`, closed by a point on the other side.
inline Matrix tube_colour(int d, int sign, double theta, RngStream& rng)
{
    Matrix c(d, d + 1);
    for (int j = 0; j < d; ++j) c.col(j) = sample_cap(d, sign, theta, rng);
    c.col(d) = antipodal_closure(c.leftCols(d), rng);
    return c;
}

inline ColourConfiguration tube_configuration(const GeneratorSpec& spec, bool coin, RngStream rng)
{
    std::vector<Matrix> colours;
    for (int i = 0; i <= spec.d; ++i) {
        RngStream r = rng.split(static_cast<std::uint64_t>(i));
        // "1 positive + d negative" is the mirror image of "d positive + 1 negative".
        const int sign = coin && r.uniform() < 0.5 ? -1 : 1;
        colours.push_back(tube_colour(spec.d, sign, spec.theta, r));
    }
    return ColourConfiguration(spec.d, std::move(colours), true);
}

inline std::uint64_t ipow(std::uint64_t b, int e)
{
    std::uint64_t r = 1;
    while (e-- > 0) r *= b;
    return r;
}

}  // namespace detail

inline ColourConfiguration gen_g1(const GeneratorSpec& spec)
{
    spec.validate();
    RngStream rng = detail::kind_stream(spec);
    std::vector<Matrix> colours;
    for (int i = 0; i <= spec.d; ++i) {
        RngStream r = rng.split(static_cast<std::uint64_t>(i));
        Matrix c(spec.d, spec.d + 1);
        for (int j = 0; j < spec.d; ++j) c.col(j) = sample_sphere(spec.d, r);
        c.col(spec.d) = antipodal_closure(c.leftCols(spec.d), r);
        colours.push_back(std::move(c));
    }
    return ColourConfiguration(spec.d, std::move(colours), true);
}

inline ColourConfiguration gen_g2(const GeneratorSpec& spec)
{
    spec.validate();
    return detail::tube_configuration(spec, true, detail::kind_stream(spec));
}

inline ColourConfiguration gen_g3(const GeneratorSpec& spec)
{
    spec.validate();
    return detail::tube_configuration(spec, false, detail::kind_stream(spec));
}

inline GeneratedInstance generate_g5(const GeneratorSpec& spec)
{
    spec.validate();
    const auto vertices = regular_simplex_vertices(spec.d);
    RngStream rng = detail::kind_stream(spec);
    for (int attempt = 0; attempt < 100; ++attempt) {
        RngStream a = rng.split(static_cast<std::uint64_t>(attempt));
        std::vector<Matrix> colours;
        for (int i = 0; i <= spec.d; ++i) {
            RngStream r = a.split(static_cast<std::uint64_t>(i));
            Matrix c(spec.d, spec.d + 1);
            for (int j = 0; j <= spec.d; ++j) c.col(j) = perturb_direction(vertices[static_cast<std::size_t>(j)], spec.epsilon, r);
            detail::shuffle_columns(c, r);
            colours.push_back(std::move(c));
        }
        ColourConfiguration config(spec.d, std::move(colours), true);
        if (check_core(config).in_core) return {std::move(config), false, attempt + 1};
    }
    throw CoreLost(100);
}

inline ColourConfiguration gen_g5(const GeneratorSpec& spec) { return generate_g5(spec).config; }

inline GeneratedInstance generate_g4(const GeneratorSpec& spec)
{
    spec.validate();
    const auto vertices = regular_simplex_vertices(spec.d);
    const bool verify = spec.d <= 3;
    const std::uint64_t target = detail::ipow(static_cast<std::uint64_t>(spec.d), spec.d + 1) + 1;
    RngStream rng = detail::kind_stream(spec);
    for (int attempt = 0; attempt < 100; ++attempt) {
        RngStream a = rng.split(static_cast<std::uint64_t>(attempt));
        std::vector<Matrix> colours;
        for (int i = 0; i <= spec.d; ++i) {
            RngStream r = a.split(static_cast<std::uint64_t>(i));
            Matrix c(spec.d, spec.d + 1);
            for (int j = 0; j < spec.d; ++j) c.col(j) = perturb_direction(vertices[static_cast<std::size_t>(i)], spec.epsilon, r);
            c.col(spec.d) = antipodal_closure(c.leftCols(spec.d), r);
            detail::shuffle_columns(c, r);
            colours.push_back(std::move(c));
        }
        ColourConfiguration config(spec.d, std::move(colours), true);
        if (!verify) return {std::move(config), false, attempt + 1};
        const auto report = count_containing(config, 0);
        if (report.degenerate == 0 && report.containing == target) return {std::move(config), true, attempt + 1};
    }
    throw CountMismatch("G4", 100);
}

inline ColourConfiguration gen_g4(const GeneratorSpec& spec) { return generate_g4(spec).config; }

/**
 * G6.  Start from a G3-style tube and, for d <= 3, run a local search: move
 * one cap point of one colour (redrawing that colour's closing point too) and
 * keep the move if the oracle count does not grow.  The count is maintained
 * by recounting only simplices through the two changed points.
 */
inline GeneratedInstance generate_g6(const GeneratorSpec& spec, int move_budget = 10000)
{
    spec.validate();
    RngStream rng = detail::kind_stream(spec);
    ColourConfiguration config = detail::tube_configuration(spec, false, rng.split("start"));
    if (spec.d > 3) return {std::move(config), false, 1};

    const int d = spec.d;
    const std::uint64_t target = static_cast<std::uint64_t>(d) * static_cast<std::uint64_t>(d) + 1;
    auto through = [&](const ColourConfiguration& c, int colour, int a, int b) {
        // Simplices through point a or point b of `colour` (a != b, disjoint sets).
        const auto x = count_through(c, colour, a);
        const auto y = count_through(c, colour, b);
        return FixedCount{x.containing + y.containing, x.degenerate + y.degenerate};
    };

    DepthReport start = count_containing(config, 0);
    std::uint64_t count = start.containing;
    std::uint64_t degenerate = start.degenerate;
    RngStream moves = rng.split("moves");
    for (int step = 0; step <= move_budget; ++step) {
        if (count == target && degenerate == 0) {
            const auto check = count_containing(config, 0);
            if (check.containing == target && check.degenerate == 0) return {std::move(config), true, step + 1};
            count = check.containing;
            degenerate = check.degenerate;
        }
        if (step == move_budget) break;
        RngStream m = moves.split(static_cast<std::uint64_t>(step));
        const int colour = static_cast<int>(m.uniform_index(static_cast<std::uint64_t>(d + 1)));
        const int index = static_cast<int>(m.uniform_index(static_cast<std::uint64_t>(d)));
        const FixedCount before = through(config, colour, index, d);

        ColourConfiguration trial = config;
        Matrix& c = trial.colours[static_cast<std::size_t>(colour)];
        const int sign = c(d - 1, index) >= 0.0 ? 1 : -1;
        c.col(index) = sample_cap(d, sign, spec.theta, m);
        c.col(d) = antipodal_closure(c.leftCols(d), m);
        const FixedCount after = through(trial, colour, index, d);

        const std::uint64_t next = count - before.containing + after.containing;
        const std::uint64_t next_degenerate = degenerate - before.degenerate + after.degenerate;
        if (next <= count && next_degenerate <= degenerate + (next < count ? 1 : 0)) {
            config = std::move(trial);
            count = next;
            degenerate = next_degenerate;
        }
    }
    throw CountMismatch("G6", move_budget);
}

inline ColourConfiguration gen_g6(const GeneratorSpec& spec) { return generate_g6(spec).config; }

inline GeneratedInstance generate(const GeneratorSpec& spec)
{
    switch (spec.kind) {
    case GeneratorKind::G1: return {gen_g1(spec), false, 1};
    case GeneratorKind::G2: return {gen_g2(spec), false, 1};
    case GeneratorKind::G3: return {gen_g3(spec), false, 1};
    case GeneratorKind::G4: return generate_g4(spec);
    case GeneratorKind::G5: return generate_g5(spec);
    case GeneratorKind::G6: return generate_g6(spec);
    }
    throw Error("unknown generator kind");
}

/// Whether the kind has a solution-count target that the oracle checks at small d.
inline bool has_count_target(GeneratorKind k) { return k == GeneratorKind::G4 || k == GeneratorKind::G6; }

}  // namespace cfp
