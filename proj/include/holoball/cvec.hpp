#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <vector>

namespace holoball {

using cxd = std::complex<double>;

// Tolerance for recognizing a point as lying on the unit sphere.
inline constexpr double kBoundaryTol = 1e-12;

/// A point of C^n with the Hermitian inner product <z,w> = sum z_j conj(w_j).
struct CVec {
    std::vector<cxd> v;

    CVec() = default;
    explicit CVec(std::size_t n) : v(n, cxd{0.0, 0.0}) {}
    CVec(std::initializer_list<cxd> init) : v(init) {}
    explicit CVec(std::vector<cxd> coords) : v(std::move(coords)) {}

    std::size_t dim() const { return v.size(); }
    cxd& operator[](std::size_t i) { return v[i]; }
    const cxd& operator[](std::size_t i) const { return v[i]; }

    operator std::span<const cxd>() const { return {v.data(), v.size()}; }
    std::span<const cxd> span() const { return {v.data(), v.size()}; }

    double norm_sq() const {
        double s = 0.0;
        for (const auto& z : v) s += std::norm(z);
        return s;
    }
    double norm() const { return std::sqrt(norm_sq()); }
};

inline cxd herm_inner_raw(const cxd* a, const cxd* b, std::size_t n) {
    cxd s{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) s += a[i] * std::conj(b[i]);
    return s;
}

/// <z,w> = sum z_j conj(w_j). Throws on dimension mismatch.
inline cxd herm_inner(std::span<const cxd> z, std::span<const cxd> w) {
    if (z.size() != w.size())
        throw std::invalid_argument("herm_inner: dimension mismatch");
    return herm_inner_raw(z.data(), w.data(), z.size());
}

inline double norm_sq(std::span<const cxd> z) {
    double s = 0.0;
    for (const auto& x : z) s += std::norm(x);
    return s;
}

inline void require_interior(std::span<const cxd> z, const char* what = "point") {
    if (!(norm_sq(z) < 1.0))
        throw std::domain_error(std::string(what) + " must be interior (|z| < 1)");
}

/// Renormalizes a near-unit vector onto the sphere; rejects points farther
/// than kBoundaryTol from it.
inline CVec make_boundary(const CVec& z) {
    const double r = z.norm();
    if (std::abs(r - 1.0) > kBoundaryTol)
        throw std::domain_error("boundary point must satisfy ||z|-1| <= 1e-12");
    CVec out = z;
    for (auto& x : out.v) x /= r;
    return out;
}

/// Carleson tube Q_r(zeta) = {z in B_n : |1 - <z,zeta>| < r} and its boundary
/// cap Q(zeta,r) on S_n. Determined by the boundary center and r in (0,2].
struct TubeSpec {
    CVec center;   // on S_n, renormalized at construction
    double radius; // in (0, 2]

    TubeSpec(const CVec& zeta, double r) : center(make_boundary(zeta)), radius(r) {
        if (!(r > 0.0 && r <= 2.0))
            throw std::invalid_argument("tube radius must lie in (0, 2]");
    }
};

inline bool tube_contains(const TubeSpec& t, std::span<const cxd> z) {
    if (!(norm_sq(z) < 1.0)) return false;
    return std::abs(1.0 - herm_inner(z, t.center)) < t.radius;
}

inline bool cap_contains(const TubeSpec& t, std::span<const cxd> xi) {
    return std::abs(1.0 - herm_inner(xi, t.center)) < t.radius;
}

inline double pow_i(double x, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

} // namespace holoball
