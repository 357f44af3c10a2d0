#pragma once

#include <complex>
#include <limits>
#include <numbers>

namespace gabor {

using cplx = std::complex<double>;

inline constexpr double kPi     = std::numbers::pi;
inline constexpr double kTwoPi  = 2.0 * std::numbers::pi;
inline constexpr double kInf    = std::numeric_limits<double>::infinity();

/// Closed interval on the real line; endpoints may be +-infinity.
struct Interval {
    double lo = -kInf;
    double hi = kInf;

    bool bounded() const { return lo > -kInf && hi < kInf; }
    bool contains(double t) const { return t >= lo && t <= hi; }

    Interval shifted(double x) const { return {lo + x, hi + x}; }

    Interval intersect(const Interval& other) const {
        return {lo > other.lo ? lo : other.lo, hi < other.hi ? hi : other.hi};
    }
    bool empty() const { return lo > hi; }
};

inline Interval whole_line() { return {}; }

}  // namespace gabor
