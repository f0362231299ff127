#pragma once

// Helpers shared by the test suites.

#include <string>

#include "cfp/cfp.hpp"

namespace cfp::test {

inline std::string fixture(const std::string& name) { return std::string(CFP_FIXTURES) + "/" + name; }

/// d x n matrix of independent uniform unit vectors.
inline Matrix sphere_points(int d, int n, RngStream& rng)
{
    Matrix m(d, n);
    for (int k = 0; k < n; ++k) m.col(k) = sample_sphere(d, rng);
    return m;
}

/// d x n matrix with standard normal entries.
inline Matrix gaussian(int d, int n, RngStream& rng)
{
    Matrix m(d, n);
    for (int k = 0; k < n; ++k)
        for (int r = 0; r < d; ++r) m(r, k) = rng.normal();
    return m;
}

inline Matrix cols(std::initializer_list<std::initializer_list<double>> points)
{
    const auto n = static_cast<Eigen::Index>(points.size());
    const auto d = static_cast<Eigen::Index>(points.begin()->size());
    Matrix m(d, n);
    Eigen::Index k = 0;
    for (const auto& p : points) {
        Eigen::Index r = 0;
        for (double v : p) m(r++, k) = v;
        ++k;
    }
    return m;
}

inline Vector vec(std::initializer_list<double> v)
{
    Vector out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index k = 0;
    for (double x : v) out(k++) = x;
    return out;
}

inline GeneratorSpec spec(GeneratorKind kind, int d, std::uint64_t seed)
{
    GeneratorSpec s;
    s.kind = kind;
    s.d = d;
    s.seed = seed;
    return s;
}

}  // namespace cfp::test
