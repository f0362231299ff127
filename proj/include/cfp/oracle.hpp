#pragma once

// Exhaustive enumeration of colourful simplices.  Practical up to d = 6
// ((d+1)^(d+1) containment tests; about 823k at d = 6).

#include <cstdint>
#include <vector>

#include "cfp/kernels.hpp"
#include "cfp/types.hpp"

namespace cfp {

class ZeroSolutions : public Error {
  public:
    ZeroSolutions() : Error("no colourful simplex contains the origin; the configuration is numerically broken") {}
};

struct DepthReport {
    int d = 0;
    std::uint64_t total = 0;
    std::uint64_t containing = 0;
    std::uint64_t degenerate = 0;
    std::vector<ColourfulSimplex> solutions;  // first list_cap solutions in enumeration order
};

namespace detail {

/// Advance a selection in lexicographic order (colour 1 most significant); false after the last one.
inline bool next_selection(std::vector<int>& sel, int base, std::size_t skip = static_cast<std::size_t>(-1))
{
    for (std::size_t k = sel.size(); k-- > 0;) {
        if (k == skip) continue;
        if (++sel[k] < base) return true;
        sel[k] = 0;
    }
    return false;
}

}  // namespace detail

inline DepthReport count_containing(const ColourConfiguration& config, std::size_t list_cap = 10000)
{
    DepthReport report;
    report.d = config.d;
    ColourfulSimplex s = ColourfulSimplex::first_points(config.d);
    do {
        ++report.total;
        const auto c = barycentric_containment(config.simplex(s));
        if (c.kind == Containment::Degenerate) {
            ++report.degenerate;
        } else if (c.contains()) {
            ++report.containing;
            if (report.solutions.size() < list_cap) report.solutions.push_back(s);
        }
    } while (detail::next_selection(s.selection, config.d + 1));
    return report;
}

/// Containing and degenerate counts restricted to simplices that use point `index` of `colour`.
struct FixedCount {
    std::uint64_t containing = 0;
    std::uint64_t degenerate = 0;
};

inline FixedCount count_through(const ColourConfiguration& config, int colour, int index)
{
    FixedCount out;
    ColourfulSimplex s = ColourfulSimplex::first_points(config.d);
    s[static_cast<std::size_t>(colour)] = index;
    do {
        const auto c = barycentric_containment(config.simplex(s));
        if (c.kind == Containment::Degenerate) ++out.degenerate;
        else if (c.contains()) ++out.containing;
    } while (detail::next_selection(s.selection, config.d + 1, static_cast<std::size_t>(colour)));
    return out;
}

inline double expected_a7_iterations(const DepthReport& report)
{
    if (report.containing == 0) throw ZeroSolutions();
    return static_cast<double>(report.total) / static_cast<double>(report.containing);
}

}  // namespace cfp
