#pragma once

// Exponential integral Ei(x) for negative arguments: power series around
// zero, Lentz continued fraction for E1 at large |x|. The continued fraction
// is also exposed in its e^x-scaled form so downstream formulas of the shape
// u*e^u*Ei(-u) stay finite for arbitrarily large u.

#include <cmath>
#include <limits>
#include <string>

#include "tsl/errors.hpp"

namespace tsl {

namespace detail {

inline constexpr double euler_gamma = 0.57721566490153286060651209008240243;

// Ei(x) for -10 < x < 0 via Ei(x) = gamma + ln|x| + sum x^k/(k*k!).
inline double ei_series_negative(double x) {
    double sum = 0.0;
    double term = 1.0;
    for (int k = 1; k <= 300; ++k) {
        term *= x / k;
        const double contrib = term / k;
        sum += contrib;
        if (std::abs(contrib) < 1e-18 * (std::abs(sum) + 1.0)) break;
    }
    return euler_gamma + std::log(-x) + sum;
}

// e^z * E1(z) for z > 0 by the modified Lentz continued fraction,
//   E1(z) = e^{-z} / (z + 1 - 1/(z + 3 - 4/(z + 5 - ...))).
inline double e1_scaled_cf(double z) {
    const double tiny = std::numeric_limits<double>::min() * 1e4;
    double b = z + 1.0;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 400; ++i) {
        const double a = -static_cast<double>(i) * i;
        b += 2.0;
        d = a * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + a / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return h;
}

} // namespace detail

/// Ei(x) = -int_{-x}^{inf} e^{-t}/t dt, restricted to x < 0 (the only
/// arguments that arise here). Absolute accuracy better than 1e-12 over
/// x in [-50, -1e-6].
inline double exponential_integral_ei(double x) {
    if (!(x < 0.0))
        throw InvalidArgument("exponential_integral_ei: requires x < 0 (got " +
                              std::to_string(x) + ")");
    if (x > -10.0) return detail::ei_series_negative(x);
    return -std::exp(x) * detail::e1_scaled_cf(-x);
}

} // namespace tsl
