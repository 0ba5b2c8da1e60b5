#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace renormlab {

// Plain open/closed real interval (lo <= hi).
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double length() const { return hi - lo; }
    double mid() const { return 0.5 * (lo + hi); }
    bool contains(double x) const { return x >= lo && x <= hi; }
    bool contains_strict(double x) const { return x > lo && x < hi; }
    bool contains_interval(const Interval& other, double tol = 0.0) const {
        return other.lo >= lo - tol && other.hi <= hi + tol;
    }
};

// Symmetric interval <-beta, beta> with a signed endpoint.
// beta > 0 when the return map has a local minimum at 0, beta < 0 for a
// local maximum; as a point set this is always [-|beta|, |beta|].
struct SignedInterval {
    double beta = 0.0;

    double radius() const { return std::abs(beta); }
    double length() const { return 2.0 * std::abs(beta); }
    Interval as_interval() const { return {-std::abs(beta), std::abs(beta)}; }
    bool contains(double x) const { return std::abs(x) <= std::abs(beta); }
};

inline Interval scaled(const Interval& a, double t) {
    double x = a.lo * t, y = a.hi * t;
    return {std::min(x, y), std::max(x, y)};
}

} // namespace renormlab
