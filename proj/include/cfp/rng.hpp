#pragma once

// Counter-based random stream.  Output k of a stream with key K is
// splitmix64(K + (k+1) * golden); children are keyed by mixing the parent key
// with the label, so a child never depends on how much its parent or its
// siblings have consumed.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace cfp {

class RngStream {
  public:
    explicit RngStream(std::uint64_t seed = 0) : key_(mix(seed ^ 0x6a09e667f3bcc909ull)) {}

    RngStream split(std::uint64_t label) const
    {
        RngStream child;
        child.key_ = mix(key_ ^ mix(label + 0x243f6a8885a308d3ull));
        return child;
    }

    RngStream split(std::string_view label) const
    {
        std::uint64_t h = 1469598103934665603ull;
        for (unsigned char c : label) {
            h ^= c;
            h *= 1099511628211ull;
        }
        return split(h);
    }

    std::uint64_t next_u64() { return mix(key_ + (++counter_) * 0x9e3779b97f4a7c15ull); }

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1].
    double uniform_open_zero() { return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53; }

    /// Uniform integer in [0, n), rejection-sampled so every value is equally likely.
    std::uint64_t uniform_index(std::uint64_t n)
    {
        const std::uint64_t limit = (~std::uint64_t{0}) - (~std::uint64_t{0}) % n;
        std::uint64_t v;
        do v = next_u64();
        while (v >= limit);
        return v % n;
    }

    /// Standard normal via Box-Muller; the second variate is kept for the next call.
    double normal()
    {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u = uniform_open_zero();
        const double v = uniform();
        const double r = std::sqrt(-2.0 * std::log(u));
        spare_ = r * std::sin(2.0 * std::numbers::pi * v);
        has_spare_ = true;
        return r * std::cos(2.0 * std::numbers::pi * v);
    }

    /// Unit-rate exponential.
    double exponential() { return -std::log(uniform_open_zero()); }

    std::uint64_t counter() const { return counter_; }

  private:
    static std::uint64_t mix(std::uint64_t z)
    {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::uint64_t key_ = 0;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace cfp
