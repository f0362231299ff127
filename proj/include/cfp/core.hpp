#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cfp/kernels.hpp"
#include "cfp/types.hpp"

namespace cfp {

/**
 * Thrown by normalize_configuration when a point coincides with the target.
 * The problem is then solved by that point alone: `colour`/`index` name it and
 * `certificate` is a colourful simplex through it (first points elsewhere)
 * with weight 1 on that colour.
 */
class PointAtOrigin : public Error {
  public:
    PointAtOrigin(int colour_index, int point_index, int d)
        : Error("point " + std::to_string(point_index + 1) + " of colour " + std::to_string(colour_index + 1) +
                " coincides with the target point"),
          colour(colour_index),
          index(point_index),
          certificate(ColourfulSimplex::first_points(d)),
          weights(Vector::Zero(d + 1))
    {
        certificate[static_cast<std::size_t>(colour_index)] = point_index;
        weights(colour_index) = 1.0;
    }

    int colour;
    int index;
    ColourfulSimplex certificate;
    Vector weights;
};

/** The origin is not in the convex hull of the given points. */
class NotInHull : public Error {
  public:
    explicit NotInHull(Vector separating)
        : Error("origin is not in the convex hull (separating direction found)"), direction(std::move(separating))
    {
    }

    /// Nearest point of the hull; every input point p has <p, direction> >= |direction|^2 > 0.
    Vector direction;
};

/**
 * Translate by -p and scale every point onto the unit sphere.
 *
 * The returned scale_record holds, per point, the norm it had after the
 * translation (composed with any previous record, so normalizing twice still
 * records the original norms).
 */
inline ColourConfiguration normalize_configuration(const ColourConfiguration& config, const Vector& p)
{
    if (p.size() != config.d) throw Error("target point has the wrong dimension");
    std::vector<Matrix> cols;
    std::vector<Vector> norms;
    cols.reserve(config.colours.size());
    for (int i = 0; i <= config.d; ++i) {
        Matrix c = config.colour(i).colwise() - p;
        Vector n(c.cols());
        for (Eigen::Index j = 0; j < c.cols(); ++j) {
            n(j) = c.col(j).norm();
            if (!(n(j) > tol::coincide)) throw PointAtOrigin(i, static_cast<int>(j), config.d);
            c.col(j) /= n(j);
        }
        if (config.scale_record && p.isZero(0.0)) n = n.cwiseProduct((*config.scale_record)[static_cast<std::size_t>(i)]);
        cols.push_back(std::move(c));
        norms.push_back(std::move(n));
    }
    ColourConfiguration out(config.d, std::move(cols), true);
    out.scale_record = std::move(norms);
    return out;
}

inline ColourConfiguration normalize_configuration(const ColourConfiguration& config)
{
    return normalize_configuration(config, Vector::Zero(config.d));
}

/**
 * Convert weights certifying sum(w_i x_i) = 0 for normalized points
 * x_i = o_i / n_i back to weights on the original points o_i.
 */
inline Vector unscale_weights(const Vector& weights, const Vector& norms)
{
    Vector w = weights.cwiseQuotient(norms);
    const double total = w.sum();
    return total > 0 ? Vector(w / total) : w;
}

namespace detail {

/// Checks the BasisCertificate invariants against the given point columns.
inline bool certificate_valid(const Matrix& points, const BasisCertificate& cert)
{
    if (cert.indices.size() != static_cast<std::size_t>(cert.weights.size())) return false;
    if (cert.weights.size() == 0) return false;
    if ((cert.weights.array() < -tol::weight).any()) return false;
    if (std::abs(cert.weights.sum() - 1.0) > tol::weight) return false;
    Vector r = Vector::Zero(points.rows());
    for (std::size_t k = 0; k < cert.indices.size(); ++k)
        r += cert.weights(static_cast<Eigen::Index>(k)) * points.col(cert.indices[k]);
    return r.norm() <= tol::residual;
}

}  // namespace detail

/**
 * Reduce a convex representation of the origin to one using at most d+1
 * affinely independent points.
 *
 * Without a witness the initial representation comes from the min-norm point
 * of the hull.  Each reduction step takes an affine dependence mu among the
 * active points (sum mu = 0, sum mu_i p_i = 0) and moves the weights along it
 * until one reaches zero; ties drop the lowest point index.
 */
inline BasisCertificate reduce_to_basis(const Matrix& points, const std::optional<Vector>& witness = std::nullopt)
{
    const auto d = points.rows();
    const auto n = points.cols();
    Vector w;
    if (witness) {
        if (witness->size() != n) throw Error("witness has the wrong length");
        w = *witness;
    } else {
        const auto np = nearest_point_hull(points);
        if (np.distance > tol::residual) throw NotInHull(np.x);
        w = np.lambda;
    }

    std::vector<int> active;
    for (Eigen::Index i = 0; i < n; ++i)
        if (w(i) > 0.0) active.push_back(static_cast<int>(i));
    if (active.empty()) throw Error("witness has no positive weight");

    for (;;) {
        const auto k = static_cast<Eigen::Index>(active.size());
        Matrix h(d + 1, k);
        for (Eigen::Index c = 0; c < k; ++c) {
            h.col(c).head(d) = points.col(active[static_cast<std::size_t>(c)]);
            h(d, c) = 1.0;
        }
        Eigen::FullPivLU<Matrix> lu(h);
        lu.setThreshold(1e-12);
        if (lu.rank() == k) break;  // affinely independent: done
        Vector mu = lu.kernel().col(0);
        if (mu.maxCoeff() <= 0.0) mu = -mu;

        double t = std::numeric_limits<double>::infinity();
        for (Eigen::Index c = 0; c < k; ++c) {
            if (mu(c) > 0.0) {
                const double ratio = w(active[static_cast<std::size_t>(c)]) / mu(c);
                if (ratio < t) t = ratio;
            }
        }
        // Lowest index among the weights that hit zero (within rounding) is dropped.
        int drop = -1;
        for (Eigen::Index c = 0; c < k; ++c) {
            const int idx = active[static_cast<std::size_t>(c)];
            if (mu(c) > 0.0 && w(idx) / mu(c) <= t * (1.0 + 1e-12) + 1e-300) {
                if (drop < 0 || idx < drop) drop = idx;
            }
        }
        for (Eigen::Index c = 0; c < k; ++c) w(active[static_cast<std::size_t>(c)]) -= t * mu(c);
        std::vector<int> next;
        for (int idx : active)
            if (idx != drop && w(idx) > 0.0) next.push_back(idx);
            else w(idx) = 0.0;
        active = std::move(next);
        if (active.empty()) throw Error("Caratheodory reduction removed every point");
    }

    BasisCertificate cert;
    cert.indices = active;
    cert.weights.resize(static_cast<Eigen::Index>(active.size()));
    for (std::size_t c = 0; c < active.size(); ++c) cert.weights(static_cast<Eigen::Index>(c)) = std::max(0.0, w(active[c]));
    cert.weights /= cert.weights.sum();
    return cert;
}

struct CoreReport {
    bool in_core = false;
    std::vector<std::optional<BasisCertificate>> certificates;  // one per colour
};

/// Whether the origin lies in the convex hull of every colour class.
inline CoreReport check_core(const ColourConfiguration& config)
{
    CoreReport report;
    report.in_core = true;
    for (int i = 0; i <= config.d; ++i) {
        std::optional<BasisCertificate> cert;
        try {
            auto c = reduce_to_basis(config.colour(i));
            if (detail::certificate_valid(config.colour(i), c)) cert = std::move(c);
        } catch (const Error&) {
        }
        if (!cert) report.in_core = false;
        report.certificates.push_back(std::move(cert));
    }
    return report;
}

}  // namespace cfp
