#pragma once

#include <functional>
#include <optional>

#include "holoball/carleson.hpp"
#include "holoball/holofun.hpp"
#include "holoball/norms.hpp"

namespace holoball {

/// Pointwise-evaluable holomorphic expression: either an exact HoloFun or a
/// quadrature-backed closure, together with its absolute tolerance.
struct Evaluator {
    std::function<cxd(std::span<const cxd>)> fn;
    double tol = 0.0;
    std::optional<HoloFun> exact;

    cxd operator()(std::span<const cxd> z) const { return fn(z); }

    static Evaluator from_holofun(HoloFun f, double tol = 0.0);
};

/// A_k f(z) = int_0^1 (df/dz_k)(tz) dt. Monomials map exactly
/// (z^m -> (m_k/|m|) z^{m - e_k}); atom terms evaluate in closed form
/// conj(a_k)((1-u)^{-b} - 1)/u, u = <z,a>, with a series branch near u = 0.
Evaluator gleason_first(const HoloFun& f, int k);

struct GleasonTerm {
    MultiIndex alpha;
    Evaluator op; // A_alpha f
};

/// Order-m factorization f(z) = sum_{|alpha|=m} z^alpha A_alpha f(z), valid
/// under the vanishing hypothesis d^gamma f(0) = 0 for |gamma| <= m-1
/// (checked numerically; rejected naming the offending gamma). Compositions
/// follow the sorted (lexicographic) index path; A_k's commute, so each
/// alpha carries the multinomial multiplicity of its paths.
std::vector<GleasonTerm> gleason_decompose(const HoloFun& f, int m,
                                           double vanish_tol = 1e-10);

/// max over probes of |f(z) - sum z^alpha A_alpha f(z)|.
double gleason_residual(const HoloFun& f, const std::vector<GleasonTerm>& terms,
                        std::span<const cxd> probes_flat);

/// T_g f(z) = int_0^1 f(tz) Rg(tz) dt/t and S_g f(z) = int_0^1 g(tz) Rf(tz) dt/t.
/// Note Rg(tz)/t = sum_k z_k (dg/dz_k)(tz), so the integrand is smooth at
/// t = 0. Polynomial pairs map exactly: for f = z^a, g = z^b (|b| >= 1),
/// T_g f = (|b|/(|a|+|b|)) z^{a+b}.
Evaluator rs_T(const HoloFun& g, const HoloFun& f, double tol = 1e-10);
Evaluator rs_S(const HoloFun& g, const HoloFun& f, double tol = 1e-10);

/// max over probes of |f g - f(0)g(0) - T_g f - S_g f|.
double multiplier_check(const HoloFun& g, const HoloFun& f,
                        std::span<const cxd> probes_flat);

/// max over probes of |R(T_g f) - f Rg|; polynomial inputs only (the exact
/// output admits an exact radial derivative).
double rs_radial_identity(const HoloFun& g, const HoloFun& f,
                          std::span<const cxd> probes_flat);

/// Continuity probe rows for S_g (and the T_g analogue) on a test family,
/// through the pointwise identities R(S_g f) = g Rf and R(T_g f) = f Rg:
/// the radial-gradient Carleson constants of those exact densities stand in
/// for the norms of S_g f / T_g f.
struct ContinuityRow {
    std::string label;
    double sg_cm = 0.0;        // cm of |g Rf|^2 (1-|z|^2)
    double f_cm = 0.0;         // cm of |Rf|^2 (1-|z|^2)
    double f_norm = 0.0;       // oscillation norm of f
    double ratio_gradchar = 0.0; // sg_cm / (hinf(g) f_cm)
    double ratio_norm = 0.0;     // sg_cm / (hinf(g) f_norm)
    double tg_cm = 0.0;        // cm of |f Rg|^2 (1-|z|^2)
    double ratio_tg = 0.0;     // tg_cm / (cm(mu_g) f_norm)
};

std::vector<ContinuityRow> sg_continuity_probe(
    const HoloFun& g, const SpaceParams& params,
    std::span<const HoloFun> family, std::span<const std::string> labels,
    const SupGrid& grid, const QuadRule& sphere, const QuadRule& ball,
    std::span<const cxd> hinf_samples);

} // namespace holoball
