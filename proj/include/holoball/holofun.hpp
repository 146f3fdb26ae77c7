#pragma once

#include <complex>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "holoball/cvec.hpp"

namespace holoball {

// Minimum Euclidean gap between an atom center and the sphere.
inline constexpr double kAtomInteriorGap = 1e-9;

struct MultiIndex {
    std::vector<int> m;

    MultiIndex() = default;
    explicit MultiIndex(std::vector<int> entries);
    MultiIndex(std::initializer_list<int> entries);

    std::size_t dim() const { return m.size(); }
    int degree() const;
    bool operator==(const MultiIndex&) const = default;
};

struct PolyTerm {
    cxd coeff;
    MultiIndex index;
};

/// coeff * (1 - <z,a>)^{-b} with an interior center and b > 0. The scalar
/// prefactors of specific atom families are folded into coeff at
/// construction, which keeps differentiation closed over the term family.
struct AtomTerm {
    cxd coeff;
    CVec center;
    double exponent;
};

/// Finite sum of monomial terms and rational atom terms; closed under all
/// the derivative operators used here. Values are immutable once built, so
/// evaluation is safe from any number of threads.
class HoloFun {
  public:
    explicit HoloFun(int n);

    static HoloFun zero(int n) { return HoloFun(n); }
    static HoloFun constant(int n, cxd c);
    static HoloFun monomial(int n, cxd c, MultiIndex m);
    static HoloFun coordinate(int n, int k); // z_k, 0-based

    HoloFun& add_poly(cxd coeff, MultiIndex m);
    HoloFun& add_atom(cxd coeff, const CVec& center, double exponent);

    int dim() const { return n_; }
    const std::vector<PolyTerm>& poly_terms() const { return poly_; }
    const std::vector<AtomTerm>& atom_terms() const { return atoms_; }
    bool is_polynomial() const { return atoms_.empty(); }
    bool is_zero() const { return poly_.empty() && atoms_.empty(); }
    int poly_degree() const; // -1 for no poly part

    cxd operator()(std::span<const cxd> z) const { return eval(z); }
    cxd eval(std::span<const cxd> z) const;

    /// Allocation-free kernels for hot loops. grad_out must hold n entries.
    void derivs_raw(const cxd* z, cxd& val, cxd* grad_out, cxd& radial_out) const;

    CVec grad(std::span<const cxd> z) const;
    cxd radial(std::span<const cxd> z) const;

    /// |grad f|^2 evaluated in one pass.
    double grad_norm_sq(std::span<const cxd> z) const;

    /// |invariant-gradient f(z)|^2 = (1-|z|^2)(|grad f|^2 - |Rf|^2),
    /// clamped at 0 against roundoff; requires |z| < 1.
    double inv_grad_sq(std::span<const cxd> z) const;

    /// T_{i,j} f = conj(z_j) df/dz_i - conj(z_i) df/dz_j, 0-based i < j.
    cxd tangential(std::span<const cxd> z, int i, int j) const;

    /// sum_{i<j} |T_{i,j} f|^2 (errors out for n = 1).
    double tangential_sum_sq(std::span<const cxd> z) const;

    HoloFun scaled(cxd c) const;
    HoloFun plus(const HoloFun& other) const;

    /// Merges duplicate monomials and drops negligible terms.
    HoloFun compacted(double drop_tol = 0.0) const;

    /// Taylor coefficient of z^m at the origin (atoms contribute through
    /// their series).
    cxd taylor_coeff(const MultiIndex& m) const;

  private:
    int n_;
    int max_entry_ = 0; // largest single-coordinate exponent in poly_
    std::vector<PolyTerm> poly_;
    std::vector<AtomTerm> atoms_;
};

/// Structured text serialization; round-trips all finite values bit-exactly.
std::string serialize(const HoloFun& f);
HoloFun parse_holofun(const std::string& text);

/// Calls fn(m) for every multi-index m of length n with |m| = degree.
void for_each_multiindex(int n, int degree,
                         const std::function<void(const MultiIndex&)>& fn);

// ---- Radial fractional derivative -------------------------------------

struct FracOptions {
    double tail_tol = 1e-10;       // certified truncation tail for atom expansion
    std::size_t max_terms = 500000; // expanded-term guard
};

/// Degree-k homogeneous parts are scaled by the Gamma-ratio multiplier;
/// atoms with exponent n+1+alpha map exactly to exponent n+1+alpha+t, other
/// atoms go through a truncated homogeneous expansion with a certified tail
/// (requires center norm <= 0.99). Requires that neither n+alpha nor
/// n+alpha+t is a negative integer.
HoloFun frac_deriv(const HoloFun& f, double alpha, double t,
                   const FracOptions& opts = {});

/// Inverse transform: reciprocal multipliers; atoms with exponent
/// n+1+alpha+t map exactly back to n+1+alpha.
HoloFun frac_inv(const HoloFun& f, double alpha, double t,
                 const FracOptions& opts = {});

struct ExpandResult {
    HoloFun poly;
    double tail_bound; // sum_{k>K} scoeff(b,k) |a|^k over all atoms
};

/// Polynomial part passes through; each atom contributes its homogeneous
/// series up to degree K. Refuses when the expanded term count would exceed
/// max_terms.
ExpandResult homogeneous_expand(const HoloFun& f, int K,
                                std::size_t max_terms = 500000);

} // namespace holoball
