#pragma once

#include <complex>
#include <functional>
#include <span>

#include "holoball/cvec.hpp"
#include "holoball/quadrule.hpp"

namespace holoball {

/// Integration weight against nu:
///   none      -> dnu
///   lambda    -> dnu / (1-|z|^2)^{n+1}   (invariant measure)
///   power(c)  -> (1-|z|^2)^c dnu
/// The lambda weight has a non-integrable boundary singularity, so it is
/// accepted only with a declared decay: the caller asserts the integrand is
/// O((1-|z|^2)^{n+decay}) with decay > 0.
struct Weight {
    enum class Kind { none, lambda, power } kind = Kind::none;
    double c = 0.0;
    double decay = 0.0;

    static Weight none() { return {}; }
    static Weight lambda(double declared_decay) {
        if (!(declared_decay > 0.0))
            throw std::invalid_argument(
                "lambda weight requires a declared decay exponent > 0");
        return {Kind::lambda, 0.0, declared_decay};
    }
    static Weight power(double c) { return {Kind::power, c, 0.0}; }

    /// Exponent e with weight = (1-|z|^2)^e (none -> 0).
    double exponent(int n) const {
        switch (kind) {
            case Kind::none: return 0.0;
            case Kind::lambda: return -(n + 1.0);
            case Kind::power: return c;
        }
        return 0.0;
    }
};

struct IntegralResult {
    cxd value{0.0, 0.0};
    double err_est = 0.0;
    std::size_t nodes_used = 0;
};

using Integrand = std::function<cxd(std::span<const cxd>)>;

/// sum_i w_i g(z_i) weight(z_i), with the weight exponent corrected for any
/// radial power already folded into the rule. Throws on a non-finite
/// integrand value. err_est is the 16-batch standard error for MC/QMC rules.
IntegralResult integrate(const Integrand& g, const QuadRule& rule,
                         const Weight& weight = Weight::none());

/// Integrates g twice, with the rule and with its first half, and reports
/// whether the value grows under refinement (divergence flag for weighted
/// integrands that violate their declared decay).
bool refinement_divergence_probe(const Integrand& g, const QuadRule& coarse,
                                 const QuadRule& fine, const Weight& weight);

/// Restricted cap moments over Q(zeta,r) on S_n:
///   m0 = sigma(cap), m1 = int_cap f dsigma, m2 = int_cap |f|^2 dsigma.
/// n = 1 uses the exact arc parameterization (adaptive panels); n >= 2
/// filters the rule's nodes and enforces the node-count floor.
struct CapMoments {
    double m0 = 0.0;
    cxd m1{0.0, 0.0};
    double m2 = 0.0;
    std::size_t n_used = 0;
    // Direct two-pass value of int_cap |f - f_cap|^2 when available (arc
    // path); avoids the cancellation floor of the moment form.
    double osc_direct = -1.0;

    cxd mean() const { return m0 > 0.0 ? m1 / m0 : cxd{0.0, 0.0}; }
    /// int_cap |f - f_cap|^2 dsigma = m2 - |m1|^2/m0 (clamped at 0).
    double oscillation() const {
        if (osc_direct >= 0.0) return osc_direct;
        if (m0 <= 0.0) return 0.0;
        const double v = m2 - std::norm(m1) / m0;
        return v < 0.0 ? 0.0 : v;
    }
};

inline constexpr std::size_t kCapNodeFloor = 200;

CapMoments cap_moments(const Integrand& f, const TubeSpec& tube, const QuadRule& rule,
                       std::size_t node_floor = kCapNodeFloor);

/// Raw restricted integral over the cap; mean_requested reweights by the
/// selected mass. Reports the node count used.
IntegralResult integrate_cap(const Integrand& g, const TubeSpec& tube,
                             const QuadRule& rule, bool mean_requested = false,
                             std::size_t node_floor = kCapNodeFloor);

/// Restricted integral over the Carleson tube Q_r(zeta) in B_n against
/// weight(z) dnu, by node filtering.
IntegralResult integrate_tube(const Integrand& g, const TubeSpec& tube,
                              const QuadRule& rule,
                              const Weight& weight = Weight::none(),
                              bool mean_requested = false,
                              std::size_t node_floor = kCapNodeFloor);

} // namespace holoball
