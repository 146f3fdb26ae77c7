#pragma once

#include <cmath>
#include <stdexcept>

#include "holoball/cvec.hpp"
#include "holoball/gamma.hpp"

namespace holoball {

/// phi_a(z) into a caller-provided buffer (no allocation; hot path).
/// phi_a is the involutive automorphism of B_n with phi_a(0)=a, phi_a(a)=0:
///   phi_a(z) = (a - P_a z - s_a Q_a z) / (1 - <z,a>),
/// P_a the projection onto span(a), Q_a = I - P_a, s_a = sqrt(1-|a|^2).
inline void mobius_raw(const cxd* a, double a_norm_sq, const cxd* z, std::size_t n,
                       cxd* out) {
    const cxd u = herm_inner_raw(z, a, n); // <z,a>
    if (a_norm_sq == 0.0) {
        for (std::size_t i = 0; i < n; ++i) out[i] = -z[i];
        return;
    }
    const double s = std::sqrt(1.0 - a_norm_sq);
    const cxd inv_denom = 1.0 / (1.0 - u);
    const cxd proj = u / a_norm_sq; // P_a z = proj * a
    for (std::size_t i = 0; i < n; ++i) {
        const cxd pz = proj * a[i];
        out[i] = (a[i] - pz - s * (z[i] - pz)) * inv_denom;
    }
}

inline CVec mobius(const CVec& a, const CVec& z) {
    if (a.dim() != z.dim()) throw std::invalid_argument("mobius: dimension mismatch");
    const double asq = a.norm_sq();
    if (!(asq < 1.0)) throw std::domain_error("mobius: |a| must be < 1");
    if (norm_sq(z) > 1.0 + 64.0 * kBoundaryTol)
        throw std::domain_error("mobius: |z| must be <= 1");
    CVec out(z.dim());
    mobius_raw(a.v.data(), asq, z.v.data(), z.dim(), out.v.data());
    return out;
}

/// |phi_z(w)| without forming the image, via the displayed identity
/// 1 - |phi_z(w)|^2 = (1-|z|^2)(1-|w|^2)/|1-<w,z>|^2.
inline double mobius_image_norm(std::span<const cxd> z, std::span<const cxd> w) {
    const double t = (1.0 - norm_sq(z)) * (1.0 - norm_sq(w)) /
                     std::norm(1.0 - herm_inner(w, z));
    const double m2 = 1.0 - t;
    return m2 <= 0.0 ? 0.0 : std::sqrt(m2);
}

/// Bergman distance beta(z,w) = (1/2) log((1+m)/(1-m)), m = |phi_z(w)|.
inline double bergman_dist(std::span<const cxd> z, std::span<const cxd> w) {
    require_interior(z, "bergman_dist: first argument");
    require_interior(w, "bergman_dist: second argument");
    const double m = mobius_image_norm(z, w);
    return std::atanh(std::min(m, 1.0 - 1e-17));
}

/// Euclidean radius along a fixed direction whose Bergman distance to rho is d.
inline double bergman_step_inward(double rho, double d) {
    const double m = std::tanh(d);
    return (rho - m) / (1.0 - m * rho);
}

/// Invariant Poisson kernel P(z,w) = (1-|z|^2)^n / |1 - <z,w>|^{2n}.
inline double poisson_kernel(const CVec& z, const CVec& w) {
    require_interior(z, "poisson_kernel: z");
    const int n = static_cast<int>(z.dim());
    return pow_i(1.0 - z.norm_sq(), n) / pow_i(std::abs(1.0 - herm_inner(z, w)), 2 * n);
}

/// Green function of the invariant Laplacian,
///   G(z) = ((n+1)/(2n)) \int_{|z|}^{1} (1-t^2)^{n-1} t^{1-2n} dt,
/// evaluated in closed form: the binomial expansion of (1-t^2)^{n-1} turns
/// the integrand into a sum of pure powers of t.
inline double green_radial(double rho, int n) {
    if (!(rho > 0.0)) throw std::domain_error("green: singular at origin");
    if (rho >= 1.0) return 0.0;
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
        const double sign = (j % 2 == 0) ? 1.0 : -1.0;
        const double c = sign * binom(n - 1, j);
        const int e = 2 * j + 2 - 2 * n; // exponent after integration
        if (e == 0)
            acc += c * std::log(1.0 / rho);
        else
            acc += c * (1.0 - std::pow(rho, e)) / e;
    }
    return acc * (n + 1) / (2.0 * n);
}

inline double green(const CVec& z) {
    require_interior(z, "green: z");
    return green_radial(z.norm(), static_cast<int>(z.dim()));
}

/// G(z,a) = G(phi_a(z)).
inline double green_pair(const CVec& z, const CVec& a) {
    require_interior(a, "green_pair: a");
    return green_radial(mobius_image_norm(a, z), static_cast<int>(z.dim()));
}

} // namespace holoball
