#pragma once

#include "kfp/rational.hpp"

#include <cmath>
#include <limits>

namespace kfp::directed {

// Directed-rounding helpers over double. IEEE arithmetic rounds each
// operation to nearest, so bumping the result one ulp in the wanted
// direction yields a valid one-sided bound for a single operation on
// exactly-represented operands.

inline double up(double x) { return std::nextafter(x, std::numeric_limits<double>::infinity()); }
inline double down(double x) { return std::nextafter(x, -std::numeric_limits<double>::infinity()); }

// Trivial operands (0, 1) give exact results; skip the bump so that e.g. a
// zero rate constant certifies a tail of exactly zero.
inline double add_up(double a, double b) {
    if (a == 0) return b;
    if (b == 0) return a;
    return up(a + b);
}
inline double mul_up(double a, double b) {
    if (a == 0 || b == 0) return 0.0;
    if (a == 1) return b;
    if (b == 1) return a;
    return up(a * b);
}
inline double div_up(double a, double b) {
    if (a == 0) return 0.0;
    if (b == 1) return a;
    return up(a / b);
}
inline double sub_down(double a, double b) {
    if (b == 0) return a;
    return down(a - b);
}
inline double sqrt_up(double x) {
    if (x == 0 || x == 1) return x;
    return up(std::sqrt(x));
}

/// x^n with every multiplication rounded upward; requires x >= 0.
inline double pow_up(double x, unsigned n) {
    double r = 1.0;
    for (unsigned i = 0; i < n; ++i) r = mul_up(r, x);
    return r;
}

/// Smallest double verified (by exact rational comparison) to be >= r.
inline double to_double_up(const Rat& r) {
    double x = r.template convert_to<double>();
    while (rat_from_double(x) < r) x = up(x);
    while (true) {
        double y = down(x);
        if (rat_from_double(y) >= r)
            x = y;
        else
            break;
    }
    return x;
}

/// Largest double verified to be <= r.
inline double to_double_down(const Rat& r) {
    double x = r.template convert_to<double>();
    while (rat_from_double(x) > r) x = down(x);
    while (true) {
        double y = up(x);
        if (rat_from_double(y) <= r)
            x = y;
        else
            break;
    }
    return x;
}

}  // namespace kfp::directed
