#include "holoball/operators.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "holoball/quad1d.hpp"
#include "holoball/reduce.hpp"

namespace holoball {

Evaluator Evaluator::from_holofun(HoloFun f, double tol) {
    Evaluator ev;
    ev.exact = std::move(f);
    ev.tol = tol;
    const HoloFun& ref = *ev.exact;
    ev.fn = [ref](std::span<const cxd> z) { return ref.eval(z); };
    return ev;
}

namespace {

// ((1-u)^{-b} - 1)/u with the removable singularity at u = 0 served by the
// series sum_{j>=1} (b)_j u^{j-1} / j! once |u| < 1e-4.
cxd atom_gleason_kernel(cxd u, double b) {
    if (std::abs(u) < 1e-4) {
        cxd term{b, 0.0}; // j = 1: (b)_1 / 1!
        cxd sum = term;
        for (int j = 2; j <= 8; ++j) {
            term *= (b + j - 1.0) * u / static_cast<double>(j);
            sum += term;
            if (std::abs(term) < 1e-17 * std::abs(sum)) break;
        }
        return sum;
    }
    return (std::pow(1.0 - u, -b) - 1.0) / u;
}

// Exact A_k on the polynomial part: z^m -> (m_k/|m|) z^{m-e_k}.
HoloFun gleason_poly_part(const HoloFun& f, int k) {
    HoloFun out(f.dim());
    for (const auto& t : f.poly_terms()) {
        const int deg = t.index.degree();
        if (deg == 0 || t.index.m[k] == 0) continue;
        MultiIndex m = t.index;
        m.m[k] -= 1;
        out.add_poly(t.coeff * (static_cast<double>(t.index.m[k]) / deg), std::move(m));
    }
    return out;
}

} // namespace

Evaluator gleason_first(const HoloFun& f, int k) {
    const int n = f.dim();
    if (!(0 <= k && k < n)) throw std::invalid_argument("gleason_first: bad index k");
    HoloFun poly = gleason_poly_part(f, k);
    if (f.is_polynomial()) return Evaluator::from_holofun(std::move(poly));

    Evaluator ev;
    ev.tol = 1e-14;
    const std::vector<AtomTerm> atoms = f.atom_terms();
    ev.fn = [poly = std::move(poly), atoms, k](std::span<const cxd> z) {
        cxd s = poly.eval(z);
        for (const auto& t : atoms) {
            const cxd u = herm_inner(z, t.center);
            s += t.coeff * std::conj(t.center[k]) * atom_gleason_kernel(u, t.exponent);
        }
        return s;
    };
    return ev;
}

std::vector<GleasonTerm> gleason_decompose(const HoloFun& f, int m,
                                           double vanish_tol) {
    if (m < 1) throw std::invalid_argument("gleason_decompose: m >= 1 required");
    const int n = f.dim();

    // Vanishing hypothesis d^gamma f(0) = 0 for |gamma| <= m-1.
    for (int d = 0; d < m; ++d) {
        std::optional<MultiIndex> bad;
        for_each_multiindex(n, d, [&](const MultiIndex& g) {
            if (bad) return;
            if (std::abs(f.taylor_coeff(g)) > vanish_tol) bad = g;
        });
        if (bad) {
            std::string msg = "gleason_decompose: vanishing hypothesis fails at gamma = (";
            for (std::size_t i = 0; i < bad->m.size(); ++i)
                msg += (i ? "," : "") + std::to_string(bad->m[i]);
            throw std::domain_error(msg + ")");
        }
    }

    // Atom-bearing inputs with m >= 2 go through a certified polynomial
    // expansion; the A_k's on polynomials are exact, so the residual is
    // controlled by the expansion tail alone.
    HoloFun work = f;
    double extra_tol = 0.0;
    if (!f.is_polynomial() && m >= 2) {
        double amax = 0.0;
        for (const auto& t : f.atom_terms()) amax = std::max(amax, t.center.norm());
        if (amax > 0.99)
            throw std::runtime_error(
                "gleason_decompose: atom expansion needs |a| <= 0.99 for m >= 2");
        int K = 16;
        ExpandResult ex = homogeneous_expand(f, K);
        while (ex.tail_bound > 1e-10 && K < (1 << 14)) {
            K *= 2;
            ex = homogeneous_expand(f, K);
        }
        work = std::move(ex.poly);
        extra_tol = ex.tail_bound;
    }

    // The A_k commute; each alpha is reached along its sorted path with
    // multiplicity m! / prod(alpha_j!).
    std::vector<GleasonTerm> out;
    for_each_multiindex(n, m, [&](const MultiIndex& alpha) {
        double logmult = std::lgamma(m + 1.0);
        for (int aj : alpha.m) logmult -= std::lgamma(aj + 1.0);
        const double mult = std::round(std::exp(logmult));

        if (work.is_polynomial()) {
            HoloFun cur = work;
            for (int k = 0; k < n; ++k)
                for (int rep = 0; rep < alpha.m[k]; ++rep) {
                    Evaluator e = gleason_first(cur, k);
                    cur = std::move(*e.exact);
                }
            out.push_back({alpha, Evaluator::from_holofun(cur.scaled(mult),
                                                          extra_tol * mult)});
            return;
        }
        // m == 1 with atoms: closed-form first-order operators.
        for (int k = 0; k < n; ++k)
            if (alpha.m[k] == 1) out.push_back({alpha, gleason_first(work, k)});
    });
    return out;
}

double gleason_residual(const HoloFun& f, const std::vector<GleasonTerm>& terms,
                        std::span<const cxd> probes_flat) {
    const int n = f.dim();
    const std::size_t P = probes_flat.size() / n;
    double worst = 0.0;
    for (std::size_t i = 0; i < P; ++i) {
        const auto z = probes_flat.subspan(i * n, n);
        cxd rhs{0.0, 0.0};
        for (const auto& term : terms) {
            cxd zp{1.0, 0.0};
            for (int k = 0; k < n; ++k)
                for (int rep = 0; rep < term.alpha.m[k]; ++rep) zp *= z[k];
            rhs += zp * term.op(z);
        }
        worst = std::max(worst, std::abs(f.eval(z) - rhs));
    }
    return worst;
}

namespace {

// Exact monomial rule: the pairing of a degree-|a| operand term with a
// degree-|b| symbol term contributes (|b|/(|a|+|b|)) z^{a+b}.
HoloFun rs_poly_exact(const HoloFun& g, const HoloFun& f) {
    HoloFun out(f.dim());
    for (const auto& tf : f.poly_terms()) {
        for (const auto& tg : g.poly_terms()) {
            const int db = tg.index.degree();
            if (db == 0) continue; // R annihilates constants
            const int da = tf.index.degree();
            MultiIndex sum = tf.index;
            for (std::size_t j = 0; j < sum.m.size(); ++j) sum.m[j] += tg.index.m[j];
            out.add_poly(tf.coeff * tg.coeff * (static_cast<double>(db) / (da + db)),
                         std::move(sum));
        }
    }
    return out.compacted();
}

Evaluator rs_integral(const HoloFun& outer, const HoloFun& inner, double tol) {
    // int_0^1 outer(tz) * sum_k z_k (d inner/dz_k)(tz) dt
    Evaluator ev;
    ev.tol = tol;
    ev.fn = [outer, inner, tol](std::span<const cxd> z) {
        const std::size_t n = z.size();
        return adaptive_gk15<cxd>(
            [&](double t) {
                cxd w[8];
                for (std::size_t k = 0; k < n; ++k) w[k] = t * z[k];
                cxd val, rad;
                cxd grad[8];
                inner.derivs_raw(w, val, grad, rad);
                cxd slope{0.0, 0.0};
                for (std::size_t k = 0; k < n; ++k) slope += z[k] * grad[k];
                return outer.eval(std::span<const cxd>(w, n)) * slope;
            },
            0.0, 1.0, tol);
    };
    return ev;
}

} // namespace

Evaluator rs_T(const HoloFun& g, const HoloFun& f, double tol) {
    if (g.dim() != f.dim()) throw std::invalid_argument("rs_T: dimension mismatch");
    if (g.is_polynomial() && f.is_polynomial())
        return Evaluator::from_holofun(rs_poly_exact(g, f));
    return rs_integral(f, g, tol); // f(tz) Rg(tz)/t
}

Evaluator rs_S(const HoloFun& g, const HoloFun& f, double tol) {
    if (g.dim() != f.dim()) throw std::invalid_argument("rs_S: dimension mismatch");
    if (g.is_polynomial() && f.is_polynomial())
        return Evaluator::from_holofun(rs_poly_exact(f, g));
    return rs_integral(g, f, tol); // g(tz) Rf(tz)/t
}

double multiplier_check(const HoloFun& g, const HoloFun& f,
                        std::span<const cxd> probes_flat) {
    const int n = f.dim();
    const Evaluator tg = rs_T(g, f);
    const Evaluator sg = rs_S(g, f);
    const CVec origin(n);
    const cxd c0 = f.eval(origin) * g.eval(origin);
    const std::size_t P = probes_flat.size() / n;
    double worst = 0.0;
    for (std::size_t i = 0; i < P; ++i) {
        const auto z = probes_flat.subspan(i * n, n);
        const cxd lhs = f.eval(z) * g.eval(z);
        const cxd rhs = c0 + tg(z) + sg(z);
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

double rs_radial_identity(const HoloFun& g, const HoloFun& f,
                          std::span<const cxd> probes_flat) {
    if (!g.is_polynomial() || !f.is_polynomial())
        throw std::invalid_argument(
            "rs_radial_identity: polynomial inputs required (the radial "
            "derivative of a quadrature-backed evaluator is not provided)");
    const Evaluator tg = rs_T(g, f);
    const HoloFun& tgf = *tg.exact;
    const int n = f.dim();
    const std::size_t P = probes_flat.size() / n;
    double worst = 0.0;
    for (std::size_t i = 0; i < P; ++i) {
        const auto z = probes_flat.subspan(i * n, n);
        const cxd lhs = tgf.radial(z);
        const cxd rhs = f.eval(z) * g.radial(z);
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

std::vector<ContinuityRow> sg_continuity_probe(
    const HoloFun& g, const SpaceParams& params,
    std::span<const HoloFun> family, std::span<const std::string> labels,
    const SupGrid& grid, const QuadRule& sphere, const QuadRule& ball,
    std::span<const cxd> hinf_samples) {
    params.require_gradient_range();
    const double p = params.p();
    const double ginf = hinf_norm(g, hinf_samples);
    const MeasureSpec mu_g = MeasureSpec::from_density(
        params.n,
        [g](std::span<const cxd> z) {
            return std::norm(g.radial(z)) * (1.0 - norm_sq(z));
        });
    const double mug_cm = cm_constant(mu_g, p, grid, &ball).constant;

    std::vector<ContinuityRow> rows;
    for (std::size_t i = 0; i < family.size(); ++i) {
        const HoloFun& f = family[i];
        ContinuityRow row;
        row.label = i < labels.size() ? labels[i] : "f" + std::to_string(i);

        const MeasureSpec mu_sgf = MeasureSpec::from_density(
            params.n, [g, f](std::span<const cxd> z) {
                return std::norm(g.eval(z) * f.radial(z)) * (1.0 - norm_sq(z));
            });
        const MeasureSpec mu_f = MeasureSpec::from_density(
            params.n, [f](std::span<const cxd> z) {
                return std::norm(f.radial(z)) * (1.0 - norm_sq(z));
            });
        const MeasureSpec mu_tgf = MeasureSpec::from_density(
            params.n, [g, f](std::span<const cxd> z) {
                return std::norm(f.eval(z) * g.radial(z)) * (1.0 - norm_sq(z));
            });

        row.sg_cm = cm_constant(mu_sgf, p, grid, &ball).constant;
        row.f_cm = cm_constant(mu_f, p, grid, &ball).constant;
        row.tg_cm = cm_constant(mu_tgf, p, grid, &ball).constant;
        row.f_norm = campanato_norm_osc(f, params, grid, sphere).value;
        row.ratio_gradchar = ginf > 0.0 && row.f_cm > 0.0
                                 ? row.sg_cm / (ginf * row.f_cm)
                                 : 0.0;
        row.ratio_norm =
            ginf > 0.0 && row.f_norm > 0.0 ? row.sg_cm / (ginf * row.f_norm) : 0.0;
        row.ratio_tg = mug_cm > 0.0 && row.f_norm > 0.0
                           ? row.tg_cm / (mug_cm * row.f_norm)
                           : 0.0;
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace holoball
