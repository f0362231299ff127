#pragma once

/**
 * The seven pivoting strategies for the colourful feasibility problem and the
 * shared driver that runs them.
 *
 *   A1  nearest point x of the simplex; replace the lowest-index colour with
 *       zero weight in x by its point minimizing <t, x>.
 *   A2  boundary point y instead of x; replace one zero-weight colour, project
 *       the origin onto [y, v] and re-enter the new simplex along that ray.
 *   A3  A1, but every zero-weight colour is replaced in one iteration.
 *   A4  A2, but every zero-weight colour is replaced before y is recomputed.
 *   A5  A4, falling back to one A3 step whenever the trace revisits a simplex.
 *   A6  move to the adjacent simplex of maximum volume across a facet whose
 *       hyperplane separates the simplex from the origin.
 *   A7  sample colourful simplices uniformly at random.
 *
 * Every solve starts by testing the initial simplex, so an instance whose
 * initial simplex already contains the origin is solved in 0 iterations.
 */

#include <ctime>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "cfp/core.hpp"
#include "cfp/kernels.hpp"
#include "cfp/rng.hpp"
#include "cfp/types.hpp"

namespace cfp {

enum class Algorithm { A1 = 1, A2, A3, A4, A5, A6, A7 };

inline constexpr Algorithm kAllAlgorithms[] = {Algorithm::A1, Algorithm::A2, Algorithm::A3, Algorithm::A4,
                                               Algorithm::A5, Algorithm::A6, Algorithm::A7};

inline std::string to_string(Algorithm a) { return "A" + std::to_string(static_cast<int>(a)); }

inline Algorithm parse_algorithm(const std::string& text)
{
    if (text.size() == 2 && (text[0] == 'a' || text[0] == 'A') && text[1] >= '1' && text[1] <= '7')
        return static_cast<Algorithm>(text[1] - '0');
    throw Error("unknown algorithm '" + text + "' (expected a1..a7)");
}

inline bool uses_nearest_point(Algorithm a) { return a == Algorithm::A1 || a == Algorithm::A3; }
inline bool uses_boundary_point(Algorithm a)
{
    return a == Algorithm::A2 || a == Algorithm::A4 || a == Algorithm::A5;
}

enum class InitHeuristic { FirstPoints, A4FirstIteration };

/// Boundary point y on the current simplex with its barycentric weights.
struct AlgebraicPoint {
    Vector y;
    Vector weights;
};

/// Visited simplices plus one scalar per entry: |x| for A1/A3, |y| for A2/A4/A5, NaN otherwise.
struct Trace {
    std::vector<ColourfulSimplex> simplices;
    std::vector<double> scalars;

    std::size_t size() const { return simplices.size(); }
    void push(const ColourfulSimplex& s, double scalar)
    {
        simplices.push_back(s);
        scalars.push_back(scalar);
    }
};

/// Reported for every point swapped in by a direction-driven pivot (A1-A5).
struct PivotEvent {
    int colour = 0;
    int new_index = 0;
    double inner = 0.0;           // <t, direction>
    double direction_norm = 0.0;
};

using PivotObserver = std::function<void(const PivotEvent&)>;

struct SolverState {
    ColourfulSimplex current;
    std::optional<NearestPointResult> geometric;
    std::optional<AlgebraicPoint> algebraic;
    long iteration = 0;
    Trace trace;
    std::optional<RngStream> rng;
    double pending_scalar = std::numeric_limits<double>::quiet_NaN();
    long rescue_steps = 0;  // A5: number of A3 steps taken
    int flip_window = 3;
    PivotObserver observer;
};

enum class SolveStatus { Solved, CapExceeded, Unstable };

inline std::string to_string(SolveStatus s)
{
    switch (s) {
    case SolveStatus::Solved: return "solved";
    case SolveStatus::CapExceeded: return "cap_exceeded";
    case SolveStatus::Unstable: return "unstable";
    }
    return "unknown";
}

struct Certificate {
    ColourfulSimplex simplex;
    Vector weights;           // for the configuration actually solved (normalized if requested)
    Vector original_weights;  // the same combination expressed on the input points
};

struct SolveOptions {
    std::optional<long> cap;
    InitHeuristic init = InitHeuristic::FirstPoints;
    bool normalize = true;
    std::uint64_t seed = 0;
    int flip_window = 3;
    bool record_trace = true;
    PivotObserver observer;
};

struct SolveOutcome {
    SolveStatus status = SolveStatus::Unstable;
    std::optional<Certificate> certificate;
    long iterations = 0;
    Trace trace;
    double total_seconds = 0.0;
    double seconds_per_iteration = 0.0;
    long degenerate_checks = 0;
    long rescue_steps = 0;
    std::string message;
};

inline long default_cap(Algorithm a, int d)
{
    switch (a) {
    case Algorithm::A1:
    case Algorithm::A3:
    case Algorithm::A5: return 10000L * d;
    case Algorithm::A6: return 100000L;
    default: return 1000000L;
    }
}

namespace detail {

inline double thread_cpu_seconds()
{
    timespec ts{};
    clock_gettime(CLOCK_THREAD_CPUTIME_ID, &ts);
    return static_cast<double>(ts.tv_sec) + 1e-9 * static_cast<double>(ts.tv_nsec);
}

inline void notify(const SolverState& state, int colour, int index, double inner, double dnorm)
{
    if (state.observer) state.observer(PivotEvent{colour, index, inner, dnorm});
}

inline std::vector<int> zero_weight_colours(const Vector& weights)
{
    std::vector<int> out;
    for (Eigen::Index i = 0; i < weights.size(); ++i)
        if (weights(i) <= tol::weight) out.push_back(static_cast<int>(i));
    return out;
}

inline AlgebraicPoint vertex_point(const ColourConfiguration& config, const ColourfulSimplex& s, int colour = 0)
{
    AlgebraicPoint p;
    p.y = config.point(colour, s[static_cast<std::size_t>(colour)]);
    p.weights = Vector::Zero(config.d + 1);
    p.weights(colour) = 1.0;
    return p;
}

/// y on the new simplex: origin's barycentric point if it is inside, otherwise the ray entry toward p.
inline AlgebraicPoint enter_along(const ColourConfiguration& config, const ColourfulSimplex& s, const Vector& p)
{
    const FacetSystem fs = facet_system(config.simplex(s));
    if ((-fs.b.array() >= -tol::weight).all()) return {Vector::Zero(config.d), -fs.b};
    const RayEntry e = ray_simplex_entry(fs, p);
    return {e.y, fs.barycentric(e.y)};
}

/// Shared A1/A3 step; `all` selects the multi-update rule.
inline void nearest_point_step(SolverState& state, const ColourConfiguration& config, bool all)
{
    NearestPointResult np = nearest_point_simplex(config.simplex(state.current));
    if (!state.trace.scalars.empty()) state.trace.scalars.back() = np.distance;
    const auto zeros = zero_weight_colours(np.lambda);
    if (zeros.empty()) throw QpFailure("nearest point has no zero weight but the simplex misses the origin");
    const double dnorm = np.distance;
    for (int colour : zeros) {
        const InnerMin m = min_inner_point(config.colour(colour), np.x);
        state.current[static_cast<std::size_t>(colour)] = m.index;
        notify(state, colour, m.index, m.value, dnorm);
        if (!all) break;
    }
    state.geometric = std::move(np);
    state.pending_scalar = std::numeric_limits<double>::quiet_NaN();
}

inline void require_algebraic(SolverState& state, const ColourConfiguration& config)
{
    if (!state.algebraic) state.algebraic = vertex_point(config, state.current);
}

}  // namespace detail

/// True iff the last trace entry equals one of the `window` entries before it.
inline bool detect_flip_flop(const std::vector<ColourfulSimplex>& trace, int window = 3)
{
    if (trace.size() < 2) return false;
    const auto& cur = trace.back();
    const std::size_t n = trace.size() - 1;
    const std::size_t from = n > static_cast<std::size_t>(window) ? n - static_cast<std::size_t>(window) : 0;
    for (std::size_t k = from; k < n; ++k)
        if (trace[k] == cur) return true;
    return false;
}

inline void a1_pivot(SolverState& state, const ColourConfiguration& config)
{
    detail::nearest_point_step(state, config, false);
}

inline void a3_pivot(SolverState& state, const ColourConfiguration& config)
{
    detail::nearest_point_step(state, config, true);
}

inline void a2_pivot(SolverState& state, const ColourConfiguration& config)
{
    detail::require_algebraic(state, config);
    const AlgebraicPoint& cur = *state.algebraic;
    const auto zeros = detail::zero_weight_colours(cur.weights);
    if (zeros.empty()) throw NoEntry();
    const int j = zeros.front();
    const InnerMin m = min_inner_point(config.colour(j), cur.y);
    detail::notify(state, j, m.index, m.value, cur.y.norm());
    const SegmentProjection p = project_onto_segment(cur.y, config.point(j, m.index));
    state.current[static_cast<std::size_t>(j)] = m.index;
    state.algebraic = detail::enter_along(config, state.current, p.point);
    state.pending_scalar = state.algebraic->y.norm();
}

inline void a4_pivot(SolverState& state, const ColourConfiguration& config)
{
    detail::require_algebraic(state, config);
    const AlgebraicPoint& cur = *state.algebraic;
    const auto zeros = detail::zero_weight_colours(cur.weights);
    if (zeros.empty()) throw NoEntry();
    Vector estimate = cur.y;
    for (int j : zeros) {
        const InnerMin m = min_inner_point(config.colour(j), estimate);
        detail::notify(state, j, m.index, m.value, estimate.norm());
        estimate = project_onto_segment(estimate, config.point(j, m.index)).point;
        state.current[static_cast<std::size_t>(j)] = m.index;
    }
    state.algebraic = detail::enter_along(config, state.current, estimate);
    state.pending_scalar = state.algebraic->y.norm();
}

inline void a5_pivot(SolverState& state, const ColourConfiguration& config)
{
    if (!detect_flip_flop(state.trace.simplices, state.flip_window)) {
        a4_pivot(state, config);
        return;
    }
    ++state.rescue_steps;
    NearestPointResult np = nearest_point_simplex(config.simplex(state.current));
    const auto zeros = detail::zero_weight_colours(np.lambda);
    if (zeros.empty()) throw QpFailure("nearest point has no zero weight but the simplex misses the origin");
    for (int colour : zeros) {
        const InnerMin m = min_inner_point(config.colour(colour), np.x);
        state.current[static_cast<std::size_t>(colour)] = m.index;
        detail::notify(state, colour, m.index, m.value, np.distance);
    }
    NearestPointResult next = nearest_point_simplex(config.simplex(state.current));
    if (next.distance <= tol::residual) {
        state.algebraic = AlgebraicPoint{next.x, next.lambda};
    } else {
        state.algebraic = detail::enter_along(config, state.current, next.x);
    }
    state.geometric = std::move(next);
    state.pending_scalar = state.algebraic->y.norm();
}

inline void a6_pivot(SolverState& state, const ColourConfiguration& config)
{
    const Matrix vertices = config.simplex(state.current);
    const FacetSystem fs = facet_system(vertices);
    int best_colour = -1;
    int best_index = -1;
    double best_volume = -1.0;
    for (int i = 0; i <= config.d; ++i) {
        if (!(fs.b(i) > tol::singular)) continue;  // facet opposite vertex i does not separate
        const Vector side = config.colour(i).transpose() * fs.A.row(i).transpose() - Vector::Constant(config.d + 1, fs.b(i));
        int far = -1;
        for (Eigen::Index j = 0; j < side.size(); ++j)
            if (side(j) < -tol::singular && (far < 0 || side(j) < side(far))) far = static_cast<int>(j);
        if (far < 0) continue;
        Matrix candidate = vertices;
        candidate.col(i) = config.point(i, far);
        const double vol = simplex_parallelotope_volume(candidate);
        if (vol > best_volume) {
            best_volume = vol;
            best_colour = i;
            best_index = far;
        }
    }
    if (best_colour < 0) throw NoCandidate();
    state.current[static_cast<std::size_t>(best_colour)] = best_index;
    state.pending_scalar = std::numeric_limits<double>::quiet_NaN();
}

inline void a7_sample(SolverState& state, const ColourConfiguration& config)
{
    if (!state.rng) state.rng = RngStream(0).split("a7");
    for (int i = 0; i <= config.d; ++i)
        state.current[static_cast<std::size_t>(i)] =
            static_cast<int>(state.rng->uniform_index(static_cast<std::uint64_t>(config.d + 1)));
    state.pending_scalar = std::numeric_limits<double>::quiet_NaN();
}

inline void pivot(Algorithm a, SolverState& state, const ColourConfiguration& config)
{
    switch (a) {
    case Algorithm::A1: a1_pivot(state, config); break;
    case Algorithm::A2: a2_pivot(state, config); break;
    case Algorithm::A3: a3_pivot(state, config); break;
    case Algorithm::A4: a4_pivot(state, config); break;
    case Algorithm::A5: a5_pivot(state, config); break;
    case Algorithm::A6: a6_pivot(state, config); break;
    case Algorithm::A7: a7_sample(state, config); break;
    }
}

/**
 * Initial simplex.  FirstPoints is (1,...,1).  A4FirstIteration runs one A4
 * multi-update from (1,...,1) with y at the colour-1 vertex and keeps only the
 * resulting simplex.
 */
inline ColourfulSimplex initialize(const ColourConfiguration& config, InitHeuristic heuristic)
{
    ColourfulSimplex start = ColourfulSimplex::first_points(config.d);
    if (heuristic == InitHeuristic::FirstPoints) return start;
    if (barycentric_containment(config.simplex(start)).contains()) return start;
    SolverState state;
    state.current = start;
    state.algebraic = detail::vertex_point(config, start);
    a4_pivot(state, config);
    return state.current;
}

inline SolveOutcome solve(const ColourConfiguration& input, Algorithm algorithm, const SolveOptions& options = {})
{
    const double t0 = detail::thread_cpu_seconds();
    SolveOutcome out;
    auto finish = [&]() {
        out.total_seconds = detail::thread_cpu_seconds() - t0;
        out.seconds_per_iteration = out.iterations > 0 ? out.total_seconds / static_cast<double>(out.iterations) : 0.0;
        return out;
    };

    ColourConfiguration work;
    try {
        work = options.normalize ? normalize_configuration(input) : input;
    } catch (const PointAtOrigin& e) {
        out.status = SolveStatus::Solved;
        out.certificate = Certificate{e.certificate, e.weights, e.weights};
        out.trace.push(e.certificate, 0.0);
        out.message = e.what();
        return finish();
    }

    SolverState state;
    state.flip_window = options.flip_window;
    state.observer = options.observer;
    if (algorithm == Algorithm::A7) state.rng = RngStream(options.seed).split("a7");
    try {
        state.current = initialize(work, options.init);
    } catch (const KernelError& e) {
        out.status = SolveStatus::Unstable;
        out.message = std::string("initialization: ") + e.what();
        return finish();
    }
    if (uses_boundary_point(algorithm)) state.algebraic = detail::vertex_point(work, state.current);
    state.trace.push(state.current, uses_boundary_point(algorithm) ? state.algebraic->y.norm()
                                                                   : std::numeric_limits<double>::quiet_NaN());

    const long cap = options.cap.value_or(default_cap(algorithm, work.d));
    for (;;) {
        const ContainmentResult c = barycentric_containment(work.simplex(state.current));
        if (c.contains()) {
            out.status = SolveStatus::Solved;
            Certificate cert{state.current, c.lambda, c.lambda};
            if (work.scale_record) {
                Vector norms(work.d + 1);
                for (int i = 0; i <= work.d; ++i)
                    norms(i) = (*work.scale_record)[static_cast<std::size_t>(i)](state.current[static_cast<std::size_t>(i)]);
                cert.original_weights = unscale_weights(c.lambda, norms);
            }
            out.certificate = std::move(cert);
            if (uses_nearest_point(algorithm)) state.trace.scalars.back() = 0.0;
            break;
        }
        if (c.kind == Containment::Degenerate) ++out.degenerate_checks;
        if (state.iteration >= cap) {
            out.status = SolveStatus::CapExceeded;
            break;
        }
        try {
            pivot(algorithm, state, work);
        } catch (const KernelError& e) {
            out.status = SolveStatus::Unstable;
            out.message = e.what();
            break;
        }
        ++state.iteration;
        if (options.record_trace || algorithm == Algorithm::A5) {
            state.trace.push(state.current, state.pending_scalar);
        } else {
            // Keep only the latest entry so the trace stays bounded.
            state.trace.simplices.back() = state.current;
            state.trace.scalars.back() = state.pending_scalar;
        }
    }
    out.iterations = state.iteration;
    out.trace = std::move(state.trace);
    out.rescue_steps = state.rescue_steps;
    return finish();
}

}  // namespace cfp
