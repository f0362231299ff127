#pragma once

/**
 * Domain types shared by every part of the colourful feasibility library.
 *
 * A configuration holds d+1 colour classes of d+1 points each in R^d.  Each
 * colour class is stored as a d x (d+1) matrix whose columns are the points,
 * so a colourful simplex is assembled by copying one column per colour.
 *
 * Indices are 0-based everywhere in the library.  Anything printed for a
 * human (traces, CLI JSON) is converted to the 1-based convention used in
 * the literature, e.g. (1,3,2,2).
 */

#include <cstddef>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace cfp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Numerical tolerances used throughout the library.
namespace tol {
inline constexpr double weight = 1e-9;          // convex weight nonnegativity / zero-weight threshold
inline constexpr double residual = 1e-8;        // norm of sum(lambda_i v_i) for certificates
inline constexpr double singular = 1e-12;       // relative LU pivot threshold
inline constexpr double unit_norm = 1e-12;      // normalized points
inline constexpr double coincide = 1e-12;       // point equals the target
inline constexpr double optimality = 1e-10;     // min-norm point first-order gap
inline constexpr double division = 1e-14;       // ray entry denominators
}  // namespace tol

/** Base class for all library errors. */
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/** A numerical kernel failed (singular system, stalled QP, missed ray). */
class KernelError : public Error {
  public:
    explicit KernelError(const std::string& what) : Error(what) {}
};

class DegenerateSimplex : public KernelError {
  public:
    DegenerateSimplex() : KernelError("degenerate simplex: homogenized vertex matrix is singular") {}
};

class QpFailure : public KernelError {
  public:
    explicit QpFailure(const std::string& what) : KernelError("nearest point failure: " + what) {}
};

class NoEntry : public KernelError {
  public:
    NoEntry() : KernelError("ray from the origin does not meet the simplex") {}
};

class DivisionDegenerate : public KernelError {
  public:
    DivisionDegenerate() : KernelError("ray direction is degenerate for the facet system") {}
};

class NoCandidate : public KernelError {
  public:
    NoCandidate() : KernelError("no separating facet with an improving point") {}
};

/** A file could not be read or written. */
class IoError : public Error {
  public:
    using Error::Error;
};

/** Selection of one point per colour.  Equality and hashing use the index vector. */
struct ColourfulSimplex {
    std::vector<int> selection;

    ColourfulSimplex() = default;
    explicit ColourfulSimplex(std::vector<int> sel) : selection(std::move(sel)) {}

    static ColourfulSimplex first_points(int d) { return ColourfulSimplex(std::vector<int>(d + 1, 0)); }

    std::size_t size() const { return selection.size(); }
    int operator[](std::size_t colour) const { return selection[colour]; }
    int& operator[](std::size_t colour) { return selection[colour]; }

    friend bool operator==(const ColourfulSimplex&, const ColourfulSimplex&) = default;

    /// 1-based rendering, e.g. "(1,3,2,2)".
    std::string to_string() const
    {
        std::string out = "(";
        for (std::size_t i = 0; i < selection.size(); ++i) {
            if (i) out += ',';
            out += std::to_string(selection[i] + 1);
        }
        return out + ")";
    }

    /// Parses the 1-based rendering produced by to_string().
    static ColourfulSimplex from_string(const std::string& text)
    {
        std::vector<int> sel;
        int value = 0;
        bool in_number = false;
        for (char c : text) {
            if (c >= '0' && c <= '9') {
                value = value * 10 + (c - '0');
                in_number = true;
            } else if (in_number) {
                sel.push_back(value - 1);
                value = 0;
                in_number = false;
            }
        }
        if (in_number) sel.push_back(value - 1);
        return ColourfulSimplex(std::move(sel));
    }
};

struct ColourfulSimplexHash {
    std::size_t operator()(const ColourfulSimplex& s) const noexcept
    {
        std::uint64_t h = 1469598103934665603ull;
        for (int v : s.selection) {
            h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ull;
            h *= 1099511628211ull;
        }
        return static_cast<std::size_t>(h);
    }
};

/**
 * The point system S_1..S_{d+1}.
 *
 * colours[i] is d x (d+1); column j is point j of colour i.  When the
 * configuration was produced by normalize_configuration, scale_record[i](j)
 * is the norm point j had before scaling (after translation).
 */
struct ColourConfiguration {
    int d = 0;
    std::vector<Matrix> colours;
    bool normalized = false;
    std::optional<std::vector<Vector>> scale_record;

    ColourConfiguration() = default;
    ColourConfiguration(int dim, std::vector<Matrix> cols, bool is_normalized = false)
        : d(dim), colours(std::move(cols)), normalized(is_normalized)
    {
        validate();
    }

    int num_colours() const { return d + 1; }
    int points_per_colour() const { return d + 1; }

    const Matrix& colour(int i) const { return colours[static_cast<std::size_t>(i)]; }
    auto point(int colour_index, int point_index) const { return colour(colour_index).col(point_index); }

    /// d x (d+1) matrix of the simplex vertices, column i taken from colour i.
    Matrix simplex(const ColourfulSimplex& s) const
    {
        Matrix out(d, d + 1);
        for (int i = 0; i <= d; ++i) out.col(i) = point(i, s[static_cast<std::size_t>(i)]);
        return out;
    }

    /// Throws Error if the shape invariants do not hold.
    void validate() const
    {
        if (d < 1) throw Error("configuration dimension must be positive");
        if (static_cast<int>(colours.size()) != d + 1)
            throw Error("configuration must have d+1 colour classes");
        for (const auto& c : colours)
            if (c.rows() != d || c.cols() != d + 1)
                throw Error("each colour class must hold d+1 points of dimension d");
        if (normalized)
            for (const auto& c : colours)
                for (Eigen::Index j = 0; j < c.cols(); ++j)
                    if (std::abs(c.col(j).norm() - 1.0) > tol::unit_norm)
                        throw Error("normalized configuration has a point off the unit sphere");
    }

    /// Bitwise equality of dimension and coordinates.
    friend bool operator==(const ColourConfiguration& a, const ColourConfiguration& b)
    {
        if (a.d != b.d || a.colours.size() != b.colours.size()) return false;
        for (std::size_t i = 0; i < a.colours.size(); ++i)
            if (a.colours[i].rows() != b.colours[i].rows() || a.colours[i].cols() != b.colours[i].cols() ||
                a.colours[i] != b.colours[i])
                return false;
        return true;
    }

    /// FNV-1a over the coordinate bit patterns; used to confirm instance sharing.
    std::uint64_t fingerprint() const
    {
        std::uint64_t h = 1469598103934665603ull;
        auto mix = [&h](std::uint64_t v) {
            for (int k = 0; k < 8; ++k) {
                h ^= (v >> (8 * k)) & 0xffu;
                h *= 1099511628211ull;
            }
        };
        mix(static_cast<std::uint64_t>(d));
        for (const auto& c : colours)
            for (Eigen::Index k = 0; k < c.size(); ++k) {
                double x = c.data()[k];
                std::uint64_t bits;
                static_assert(sizeof bits == sizeof x);
                std::memcpy(&bits, &x, sizeof bits);
                mix(bits);
            }
        return h;
    }
};

/** Convex weights on a subset of input points whose weighted sum is the origin. */
struct BasisCertificate {
    std::vector<int> indices;
    Vector weights;
};

}  // namespace cfp
