#pragma once

#include <cmath>
#include <stdexcept>

namespace holoball {

/// log|Gamma(x)| together with the sign of Gamma(x).
/// Non-positive integer arguments are poles and rejected.
inline double log_abs_gamma(double x, int& sign) {
    if (x > 0.0) {
        sign = 1;
        return std::lgamma(x);
    }
    const double nearest = std::round(x);
    if (x <= 0.0 && std::abs(x - nearest) < 1e-12)
        throw std::domain_error("gamma: argument at a pole");
    // Gamma alternates sign between consecutive negative integers.
    const int poles_passed = static_cast<int>(std::floor(-x));
    sign = (poles_passed % 2 == 0) ? -1 : 1;
    return std::lgamma(x);
}

/// Gamma(a)Gamma(b) / (Gamma(c)Gamma(d)) evaluated through log-gamma so the
/// ratio stays finite where the individual factors overflow.
inline double gamma_ratio(double a, double b, double c, double d) {
    int sa, sb, sc, sd;
    const double lg = log_abs_gamma(a, sa) + log_abs_gamma(b, sb) -
                      log_abs_gamma(c, sc) - log_abs_gamma(d, sd);
    return sa * sb * sc * sd * std::exp(lg);
}

/// Multiplier applied to the degree-k homogeneous part by the radial
/// fractional derivative with parameters (alpha, t) in dimension n.
inline double frac_multiplier(int n, double alpha, double t, int k) {
    return gamma_ratio(n + 1 + alpha, n + 1 + k + alpha + t,
                       n + 1 + alpha + t, n + 1 + k + alpha);
}

/// Taylor coefficient of (1-u)^{-b}: Gamma(k+b) / (Gamma(b) k!).
inline double binomial_series_coeff(double b, int k) {
    return gamma_ratio(k + b, 1.0, b, k + 1.0);
}

inline double log_binomial_series_coeff(double b, int k) {
    int s1, s2;
    return log_abs_gamma(k + b, s1) - log_abs_gamma(b, s2) - std::lgamma(k + 1.0);
}

inline double binom(int n, int k) {
    return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                               std::lgamma(n - k + 1.0)));
}

} // namespace holoball
