#include <cmath>
#include <map>
#include <stdexcept>

#include "holoball/gamma.hpp"
#include "holoball/holofun.hpp"

namespace holoball {

namespace {

void check_hypothesis(int n, double alpha, double t) {
    for (double x : {n + alpha, n + alpha + t}) {
        const double r = std::round(x);
        if (x < -0.5 && std::abs(x - r) < 1e-9)
            throw std::domain_error(
                "fractional derivative: n+alpha and n+alpha+t must not be "
                "negative integers");
    }
}

// Degree-k multiplier, direction = +1 for the derivative, -1 for the inverse.
double multiplier(int n, double alpha, double t, int k, int direction) {
    const double m = frac_multiplier(n, alpha, t, k);
    return direction > 0 ? m : 1.0 / m;
}

std::size_t expanded_term_count(int n, int K) {
    // C(K+n, n)
    double c = 1.0;
    for (int i = 1; i <= n; ++i) c *= static_cast<double>(K + i) / i;
    return static_cast<std::size_t>(c + 0.5);
}

// Certified tail of sum_{k>K} mult(k) scoeff(b,k) |a|^k via a geometric
// majorant: the term ratio is bounded by q(K) = |a| * sup factors, with both
// factors monotone toward 1.
double tail_bound_after(int n, double alpha, double t, int direction, double b,
                        double anorm, int K) {
    if (anorm == 0.0) return 0.0;
    // Successive multiplier ratio is (y+t)/y (or its reciprocal) with
    // y = n+1+k+alpha; monotone toward 1 once y and y+t are positive, so its
    // supremum over the tail sits at k = K+1.
    const double y = n + 1.0 + (K + 1) + alpha;
    if (y <= 0.0 || y + t <= 0.0) return INFINITY; // grow K further
    const double f1 = std::max(1.0, direction > 0 ? (y + t) / y : y / (y + t));
    const double f2 = b >= 1.0 ? (K + 1 + b) / (K + 2.0) : 1.0;
    const double q = anorm * f1 * f2;
    if (!(q < 1.0)) return INFINITY;
    const double term =
        std::abs(multiplier(n, alpha, t, K + 1, direction)) *
        std::exp(log_binomial_series_coeff(b, K + 1) + (K + 1) * std::log(anorm));
    return term / (1.0 - q);
}

double plain_tail_bound(double b, double anorm, int K) {
    if (anorm == 0.0) return 0.0;
    const double f2 = b >= 1.0 ? (K + 1 + b) / (K + 2.0) : 1.0;
    const double q = anorm * f2;
    if (!(q < 1.0)) return INFINITY;
    const double term =
        std::exp(log_binomial_series_coeff(b, K + 1) + (K + 1) * std::log(anorm));
    return term / (1.0 - q);
}

// Appends the degree-<=K expansion of coeff (1-<z,a>)^{-b}, with the degree-k
// slice scaled by mult(k).
void append_atom_expansion(HoloFun& out, const AtomTerm& atom, int K,
                           const std::function<double(int)>& mult) {
    const int n = static_cast<int>(atom.center.dim());
    for (int k = 0; k <= K; ++k) {
        const double base = binomial_series_coeff(atom.exponent, k) * mult(k);
        if (base == 0.0) continue;
        for_each_multiindex(n, k, [&](const MultiIndex& m) {
            double logmult = std::lgamma(k + 1.0);
            cxd abar{1.0, 0.0};
            for (int j = 0; j < n; ++j) {
                logmult -= std::lgamma(m.m[j] + 1.0);
                for (int i = 0; i < m.m[j]; ++i) abar *= std::conj(atom.center[j]);
            }
            const cxd c = atom.coeff * base * std::exp(logmult) * abar;
            if (c != cxd{0.0, 0.0}) out.add_poly(c, m);
        });
    }
}

HoloFun frac_apply(const HoloFun& f, double alpha, double t, int direction,
                   const FracOptions& opts) {
    const int n = f.dim();
    check_hypothesis(n, alpha, t);
    if (t == 0.0) return f;

    HoloFun out(n);
    // Polynomial part: exact Gamma-ratio multiplier per homogeneous degree.
    for (const auto& term : f.poly_terms())
        out.add_poly(term.coeff * multiplier(n, alpha, t, term.index.degree(), direction),
                     term.index);

    const double matched = direction > 0 ? n + 1 + alpha : n + 1 + alpha + t;
    const double target = direction > 0 ? n + 1 + alpha + t : n + 1 + alpha;
    for (const auto& atom : f.atom_terms()) {
        if (std::abs(atom.exponent - matched) <= 1e-12 * std::max(1.0, matched) &&
            target > 0.0) {
            out.add_atom(atom.coeff, atom.center, target);
            continue;
        }
        const double anorm = atom.center.norm();
        if (anorm > 0.99)
            throw std::runtime_error(
                "fractional derivative: truncation tail bound unachievable for "
                "|a| > 0.99");
        int K = 8;
        while (tail_bound_after(n, alpha, t, direction, atom.exponent, anorm, K) >
               opts.tail_tol) {
            K *= 2;
            if (K > 1 << 20)
                throw std::runtime_error(
                    "fractional derivative: tail tolerance not reachable");
        }
        if (expanded_term_count(n, K) > opts.max_terms)
            throw std::runtime_error(
                "fractional derivative: expansion exceeds the term limit");
        append_atom_expansion(out, atom, K, [&](int k) {
            return multiplier(n, alpha, t, k, direction);
        });
    }
    return out;
}

} // namespace

HoloFun frac_deriv(const HoloFun& f, double alpha, double t, const FracOptions& opts) {
    return frac_apply(f, alpha, t, +1, opts);
}

HoloFun frac_inv(const HoloFun& f, double alpha, double t, const FracOptions& opts) {
    return frac_apply(f, alpha, t, -1, opts);
}

ExpandResult homogeneous_expand(const HoloFun& f, int K, std::size_t max_terms) {
    if (K < 0) throw std::invalid_argument("homogeneous_expand: K >= 0 required");
    const int n = f.dim();
    HoloFun out(n);
    for (const auto& term : f.poly_terms()) out.add_poly(term.coeff, term.index);
    double tail = 0.0;
    if (!f.atom_terms().empty() &&
        expanded_term_count(n, K) * f.atom_terms().size() > max_terms)
        throw std::runtime_error("homogeneous_expand: expansion exceeds the term limit");
    for (const auto& atom : f.atom_terms()) {
        append_atom_expansion(out, atom, K, [](int) { return 1.0; });
        tail += std::abs(atom.coeff) * plain_tail_bound(atom.exponent,
                                                        atom.center.norm(), K);
    }
    return {out.compacted(), tail};
}

} // namespace holoball
