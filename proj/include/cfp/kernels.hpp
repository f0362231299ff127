#pragma once

/**
 * Numerical primitives shared by the pivoting algorithms.
 *
 * All functions take the simplex as a d x (d+1) matrix whose columns are the
 * vertices; column i is the vertex of colour i.  They are pure and reentrant.
 */

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

#include "cfp/types.hpp"

namespace cfp {

// ---------------------------------------------------------------------------
// Containment
// ---------------------------------------------------------------------------

enum class Containment { Contains, NotContained, Degenerate };

struct ContainmentResult {
    Containment kind = Containment::Degenerate;
    Vector lambda;  // barycentric coordinates of the origin (empty when Degenerate)

    bool contains() const { return kind == Containment::Contains; }
};

namespace detail {

/// [V; 1^T] for a d x (d+1) vertex matrix.
inline Matrix homogenize(const Matrix& vertices)
{
    Matrix m(vertices.rows() + 1, vertices.cols());
    m.topRows(vertices.rows()) = vertices;
    m.row(vertices.rows()).setOnes();
    return m;
}

/// Partial-pivot LU that also reports whether the smallest pivot is below
/// tol::singular times the largest matrix entry.
struct CheckedLu {
    Eigen::PartialPivLU<Matrix> lu;
    bool singular = false;

    explicit CheckedLu(const Matrix& m) : lu(m)
    {
        const double scale = std::max(m.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
        const double min_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
        singular = !(min_pivot >= tol::singular * scale);
    }
};

}  // namespace detail

/// Barycentric coordinates of the origin with respect to the simplex.
inline ContainmentResult barycentric_containment(const Matrix& vertices)
{
    const auto n = vertices.cols();
    detail::CheckedLu f(detail::homogenize(vertices));
    if (f.singular) return {Containment::Degenerate, Vector()};
    Vector rhs = Vector::Zero(n);
    rhs(n - 1) = 1.0;
    Vector lambda = f.lu.solve(rhs);
    if (!lambda.allFinite()) return {Containment::Degenerate, Vector()};
    const bool inside = (lambda.array() >= -tol::weight).all();
    return {inside ? Containment::Contains : Containment::NotContained, std::move(lambda)};
}

// ---------------------------------------------------------------------------
// Min-norm point (Wolfe's corral method)
// ---------------------------------------------------------------------------

struct NearestPointResult {
    Vector x;              // nearest point of the hull to the origin
    Vector lambda;         // weights, one per input column
    std::vector<int> support;  // columns with weight > tol::weight
    double distance = 0.0;
    int inner_steps = 0;
};

namespace detail {

/// Affine minimizer of the norm over the affine hull of the given columns:
/// coefficients mu with sum(mu) = 1 minimizing |P mu|.
inline Vector affine_minimizer(const Matrix& points, const std::vector<int>& corral)
{
    const auto k = static_cast<Eigen::Index>(corral.size());
    Vector mu(k);
    if (k == 1) {
        mu(0) = 1.0;
        return mu;
    }
    const auto base = points.col(corral[0]);
    Matrix diffs(points.rows(), k - 1);
    for (Eigen::Index i = 1; i < k; ++i) diffs.col(i - 1) = points.col(corral[static_cast<std::size_t>(i)]) - base;
    Vector t = diffs.colPivHouseholderQr().solve(-base);
    mu(0) = 1.0 - t.sum();
    mu.tail(k - 1) = t;
    return mu;
}

}  // namespace detail

/**
 * Point of minimum Euclidean norm in the convex hull of the columns of
 * `points` (any number of columns; for a simplex pass its d+1 vertices).
 *
 * Wolfe's method: keep a corral of affinely independent columns with positive
 * weights; add the column most violating the supporting-hyperplane condition,
 * then walk towards the corral's affine minimizer, dropping columns whose
 * weight reaches zero.  Terminates when the first-order gap
 * |x|^2 - min_j <p_j, x> is at most tol::optimality (relative to the squared
 * data scale).  Throws QpFailure after `max_steps` inner steps (default
 * 1000 * number of columns).
 */
inline NearestPointResult nearest_point_hull(const Matrix& points, int max_steps = -1)
{
    const auto n = points.cols();
    if (n == 0) throw QpFailure("empty point set");
    if (max_steps < 0) max_steps = 1000 * static_cast<int>(n);

    const Vector sq_norms = points.colwise().squaredNorm().transpose();
    const double scale = std::max(1.0, sq_norms.maxCoeff());

    Eigen::Index start = 0;
    sq_norms.minCoeff(&start);
    std::vector<int> corral{static_cast<int>(start)};
    std::vector<double> w{1.0};
    Vector x = points.col(start);

    auto rebuild_x = [&]() {
        x.setZero(points.rows());
        for (std::size_t i = 0; i < corral.size(); ++i) x += w[i] * points.col(corral[i]);
    };

    int steps = 0;
    bool optimal = false;
    while (steps < max_steps) {
        const double xx = x.squaredNorm();
        if (xx <= 1e-30 * scale) {
            optimal = true;
            break;
        }
        const Vector g = points.transpose() * x;
        Eigen::Index j = 0;
        const double gmin = g.minCoeff(&j);
        // The gap bounds |x| minus the true distance times |x|; scaling by |x|
        // keeps the test meaningful when the origin is (nearly) in the hull.
        const double gap_scale = std::sqrt(xx * scale);
        if (xx - gmin <= tol::optimality * gap_scale) {
            optimal = true;
            break;
        }
        if (std::find(corral.begin(), corral.end(), static_cast<int>(j)) != corral.end()) {
            // Numerical stall: the best column is already in the corral.
            if (xx - gmin <= 1e-8 * scale) optimal = true;
            break;
        }
        corral.push_back(static_cast<int>(j));
        w.push_back(0.0);

        // Minor cycle.
        while (steps < max_steps) {
            ++steps;
            const Vector mu = detail::affine_minimizer(points, corral);
            if (!mu.allFinite()) throw QpFailure("affine minimizer is not finite");
            const double floor = 1e-14;
            if ((mu.array() > floor).all()) {
                w.assign(mu.data(), mu.data() + mu.size());
                if (static_cast<Eigen::Index>(corral.size()) == points.rows() + 1) {
                    // A full-dimensional corral spans R^d, so its affine minimizer is
                    // the origin itself; round-off in mu should not restart the search.
                    x.setZero(points.rows());
                    optimal = true;
                } else {
                    rebuild_x();
                }
                break;
            }
            double theta = 1.0;
            for (std::size_t i = 0; i < corral.size(); ++i) {
                if (mu(static_cast<Eigen::Index>(i)) <= floor) {
                    const double denom = w[i] - mu(static_cast<Eigen::Index>(i));
                    if (denom > 0) theta = std::min(theta, w[i] / denom);
                }
            }
            theta = std::clamp(theta, 0.0, 1.0);
            for (std::size_t i = 0; i < corral.size(); ++i)
                w[i] = theta * mu(static_cast<Eigen::Index>(i)) + (1.0 - theta) * w[i];
            // Drop the column(s) whose weight reached zero; always drop at least the smallest.
            std::size_t smallest = 0;
            for (std::size_t i = 1; i < w.size(); ++i)
                if (w[i] < w[smallest]) smallest = i;
            std::vector<int> kept;
            std::vector<double> kept_w;
            for (std::size_t i = 0; i < corral.size(); ++i) {
                if (i == smallest || w[i] <= floor) continue;
                kept.push_back(corral[i]);
                kept_w.push_back(w[i]);
            }
            if (kept.empty()) throw QpFailure("corral collapsed");
            const double total = std::accumulate(kept_w.begin(), kept_w.end(), 0.0);
            for (double& v : kept_w) v /= total;
            corral = std::move(kept);
            w = std::move(kept_w);
            rebuild_x();
        }
    }
    if (!optimal) throw QpFailure("inner-step cap reached without optimality");

    NearestPointResult out;
    out.lambda = Vector::Zero(n);
    for (std::size_t i = 0; i < corral.size(); ++i) out.lambda(corral[i]) = w[i];
    out.x = x;
    out.distance = x.norm();
    out.inner_steps = steps;
    for (Eigen::Index i = 0; i < n; ++i)
        if (out.lambda(i) > tol::weight) out.support.push_back(static_cast<int>(i));
    return out;
}

/// Nearest point of a simplex (d+1 vertices) to the origin.
inline NearestPointResult nearest_point_simplex(const Matrix& vertices)
{
    return nearest_point_hull(vertices, 1000 * static_cast<int>(vertices.cols()));
}

// ---------------------------------------------------------------------------
// Facet inequalities
// ---------------------------------------------------------------------------

/**
 * Simplex written as {z : A z >= b}.  Row i is the facet opposite vertex i and
 * A_i z - b_i is the barycentric coordinate of z for vertex i, so
 * A_i v_i - b_i = 1.
 */
struct FacetSystem {
    Matrix A;  // (d+1) x d
    Vector b;  // d+1

    Vector barycentric(const Eigen::Ref<const Vector>& z) const { return A * z - b; }
};

inline FacetSystem facet_system(const Matrix& vertices)
{
    const auto d = vertices.rows();
    detail::CheckedLu f(detail::homogenize(vertices));
    if (f.singular) throw DegenerateSimplex();
    const Matrix inv = f.lu.inverse();
    if (!inv.allFinite()) throw DegenerateSimplex();
    return {inv.leftCols(d), -inv.col(d)};
}

struct RayEntry {
    double alpha = 0.0;
    Vector y;
};

/**
 * Boundary point alpha*p of the simplex on the ray from the origin through p.
 *
 * With the origin outside the simplex this is where the ray enters:
 * alpha = max over rows with A_i p > 0 of b_i / (A_i p).  When the origin is
 * inside (that maximum is not positive) the ray can only leave the simplex, and
 * the exit parameter min over rows with A_i p < 0 of b_i / (A_i p) is used.
 */
inline RayEntry ray_simplex_entry(const FacetSystem& fs, const Eigen::Ref<const Vector>& p)
{
    const Vector ap = fs.A * p;
    if (p.squaredNorm() == 0.0 || ap.cwiseAbs().maxCoeff() < tol::division) throw DivisionDegenerate();

    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < ap.size(); ++i) {
        if (ap(i) > tol::division)
            lo = std::max(lo, fs.b(i) / ap(i));
        else if (ap(i) < -tol::division)
            hi = std::min(hi, fs.b(i) / ap(i));
    }
    const double scale = std::max(1.0, fs.b.cwiseAbs().maxCoeff());
    double alpha;
    if (lo > 0.0) {
        alpha = lo;
        // A feasible p bounds the entry parameter by 1; ratios past it are rounding noise.
        if (alpha > 1.0 && fs.barycentric(p).minCoeff() >= -tol::weight * scale) alpha = 1.0;
    } else if (std::isfinite(hi) && hi > 0.0) {
        alpha = hi;
    } else {
        throw NoEntry();
    }

    Vector y = alpha * p;
    const Vector slack = fs.barycentric(y);
    if (slack.minCoeff() < -tol::weight * scale) throw NoEntry();
    return {alpha, std::move(y)};
}

// ---------------------------------------------------------------------------
// Small helpers
// ---------------------------------------------------------------------------

struct SegmentProjection {
    Vector point;
    double t = 0.0;  // 0 at a, 1 at b
};

/// Closest point of the segment [a, b] to the origin.
inline SegmentProjection project_onto_segment(const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& b)
{
    const Vector ab = b - a;
    const double len2 = ab.squaredNorm();
    if (len2 <= tol::division * tol::division) return {a, 0.0};
    const double t = std::clamp(-a.dot(ab) / len2, 0.0, 1.0);
    return {a + t * ab, t};
}

struct InnerMin {
    int index = 0;
    double value = 0.0;
};

/// Column of `colour` minimizing <t, direction>; ties go to the lowest index.
inline InnerMin min_inner_point(const Matrix& colour, const Eigen::Ref<const Vector>& direction)
{
    const Vector g = colour.transpose() * direction;
    InnerMin best{0, g(0)};
    for (Eigen::Index j = 1; j < g.size(); ++j)
        if (g(j) < best.value) best = {static_cast<int>(j), g(j)};
    return best;
}

/// |det(v_2 - v_1, ..., v_{d+1} - v_1)| without the 1/d! factor.
inline double simplex_parallelotope_volume(const Matrix& vertices)
{
    const auto d = vertices.rows();
    if (d == 0) return 0.0;
    Matrix edges = vertices.rightCols(d).colwise() - vertices.col(0);
    return std::abs(edges.partialPivLu().determinant());
}

inline double simplex_volume(const Matrix& vertices)
{
    double v = simplex_parallelotope_volume(vertices);
    for (Eigen::Index k = 2; k <= vertices.rows(); ++k) v /= static_cast<double>(k);
    return std::isfinite(v) ? v : 0.0;
}

}  // namespace cfp
