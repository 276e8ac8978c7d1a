#pragma once

#include <stdexcept>
#include <string>

namespace hamcert {

/// Closed interval [lo, hi].
struct Interval {
    double lo = 0.0;
    double hi = 1.0;

    double length() const { return hi - lo; }
    bool contains(double x) const { return x >= lo && x <= hi; }
};

inline bool same_interval(const Interval& a, const Interval& b, double tol = 0.0) {
    return std::abs(a.lo - b.lo) <= tol && std::abs(a.hi - b.hi) <= tol;
}

/// Invalid input: bad parameters, malformed files, violated preconditions.
/// CLI maps this to exit code 1.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical failure: divergence, singular systems, unresolved integrals.
/// CLI maps this to exit code 2.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace hamcert
