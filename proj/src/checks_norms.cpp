#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "checks_internal.hpp"
#include "holoball/carleson.hpp"
#include "holoball/lattice.hpp"
#include "holoball/mobius.hpp"
#include "holoball/norms.hpp"
#include "holoball/report.hpp"

namespace holoball::detail {

namespace {

double drift(double base, double doubled) {
    if (!(base > 0.0) || !std::isfinite(base) || !std::isfinite(doubled))
        return INFINITY;
    return std::abs(doubled - base) / base;
}

// Levels and grids for the three-characterization comparison. Everything is
// derived from one integer resolution step so "doubling" is a single bump.
// The Mobius/Green a-sample grid is coarser than the cap grid: those two
// integrals run per sample over the full domain, while the caps only bucket.
struct EqSetup {
    SupGrid grid;   // cap centers and radii
    SupGrid a_grid; // Mobius/Green a-samples
    QuadRule sphere;     // hardy + mobius integrals
    QuadRule osc_sphere; // cap filtering (n >= 2 wants more nodes)
    QuadRule ball;       // green integrals
};

EqSetup eq_setup(int n, int step, std::uint64_t seed) {
    EqSetup s;
    if (n == 1) {
        s.grid = make_grid(1, 64 * step, 12 * step, 0.02, 1.0, 0, seed);
        s.a_grid = make_grid(1, 24 * step, 5 * step, 0.02, 1.0, 16 * step, seed);
        s.sphere = sphere_rule(1, 5 + step, seed);
        s.osc_sphere = s.sphere; // arc parameterization ignores the nodes
        s.ball = ball_rule(1, 1 + step, seed);
        return s;
    }
    s.grid = make_grid(n, 48 * step, 6 * step, 0.1, 1.0, 0, seed);
    s.a_grid = make_grid(n, 24 * step, 5 * step, 0.1, 1.0, 16 * step, seed);
    s.sphere = sphere_rule(n, step, seed);            // 2^{13+step}
    s.osc_sphere = sphere_rule(n, 3 + step, seed);    // 2^{16+step}
    s.ball = ball_rule(n, step, seed);
    return s;
}

struct TripleSemis {
    double osc, mob, grn, hardy;
};

std::vector<std::array<TripleSemis, 3>> family_triples(
    const TestFamily& fam, const EqSetup& st, std::span<const double> svals) {
    std::vector<std::array<TripleSemis, 3>> out(fam.fs.size());
    const int n = st.grid.n;
    const std::vector<cxd> a_flat = st.a_grid.a_samples();
    for (std::size_t fi = 0; fi < fam.fs.size(); ++fi) {
        const HoloFun& f = fam.fs[fi];
        const CapProfile cp = cap_profile(f, st.grid, st.osc_sphere);
        const ASampleProfile mp = mobius_profile(f, a_flat, n, st.sphere);
        const ASampleProfile gp = green_profile(f, a_flat, n, st.ball);
        const double hardy = hardy2_norm(f, st.sphere);
        for (std::size_t si = 0; si < svals.size(); ++si) {
            const SpaceParams params = SpaceParams::make(n, svals[si]);
            out[fi][si] = {osc_norm_from_profile(cp, hardy, params).seminorm,
                           mobius_norm_from_profile(mp, params).value,
                           green_norm_from_profile(gp, params).value, hardy};
        }
    }
    return out;
}

// Bracket constants per s: seminorm-vs-seminorm and total-vs-total, where the
// total adds the Hardy part to each characterization's seminorm.
void brackets_for(const std::vector<std::array<TripleSemis, 3>>& trip, std::size_t si,
                  double& c_semi, double& c_total) {
    std::vector<double> rs, rt;
    for (const auto& row : trip) {
        const TripleSemis& t = row[si];
        if (t.osc < 1e-9) continue;
        rs.push_back(t.mob / t.osc);
        rs.push_back(t.grn / t.osc);
        rs.push_back(t.grn / std::max(t.mob, 1e-300));
        const double to = t.hardy + t.osc, tm = t.hardy + t.mob, tg = t.hardy + t.grn;
        rt.push_back(tm / to);
        rt.push_back(tg / to);
        rt.push_back(tg / tm);
    }
    c_semi = bracket_of_ratios(rs);
    c_total = bracket_of_ratios(rt);
}

} // namespace

CheckResult check_norm_equivalence(const CheckContext& ctx) {
    CheckResult res;
    res.criterion = 8;
    res.name = "three-norm equivalence";
    res.csv_header = kCheckCsvHeader;
    res.aux_csv_name = "norms";
    res.aux_csv_header = kNormCsvHeader;
    const double svals[3] = {-0.25, 0.0, 0.25};
    bool pass = true;
    std::ostringstream detail;
    std::vector<int> dims = {1, 2};
    if (ctx.n_override) dims = {*ctx.n_override};
    for (int n : dims) {
        // Per-norm report rows for one family member (the |a| = 0.9 kernel).
        {
            const EqSetup st = eq_setup(n, ctx.level, ctx.seed);
            CVec a(n);
            a[0] = cxd{0.9, 0.0};
            HoloFun g(n);
            g.add_atom(1.0, a, static_cast<double>(n));
            const CapProfile cp = cap_profile(g, st.grid, st.osc_sphere);
            const std::vector<cxd> a_flat = st.a_grid.a_samples();
            const ASampleProfile mp = mobius_profile(g, a_flat, n, st.sphere);
            const ASampleProfile gp = green_profile(g, a_flat, n, st.ball);
            const double hardy = hardy2_norm(g, st.sphere);
            for (double s : svals) {
                const SpaceParams params = SpaceParams::make(n, s);
                const NormReport ro = osc_norm_from_profile(cp, hardy, params);
                const NormReport rm = mobius_norm_from_profile(mp, params);
                const NormReport rg = green_norm_from_profile(gp, params);
                res.aux_csv_rows.push_back(
                    norm_csv_row("campanato_osc", n, s, ro.value, ro.argmax_r,
                                 ro.argmax_center, ro.nodes_used, ctx.seed));
                res.aux_csv_rows.push_back(
                    norm_csv_row("campanato_mobius", n, s, rm.value, rm.argmax_r,
                                 rm.argmax_center, rm.nodes_used, ctx.seed));
                res.aux_csv_rows.push_back(
                    norm_csv_row("campanato_green", n, s, rg.value, rg.argmax_r,
                                 rg.argmax_center, rg.nodes_used, ctx.seed));
            }
        }
        const TestFamily fam = norm_family(n, ctx.seed, 5, 20);
        const auto base =
            family_triples(fam, eq_setup(n, ctx.level, ctx.seed), svals);
        const auto fine =
            family_triples(fam, eq_setup(n, ctx.level + 1, ctx.seed), svals);
        for (std::size_t si = 0; si < 3; ++si) {
            double cs0, ct0, cs1, ct1;
            brackets_for(base, si, cs0, ct0);
            brackets_for(fine, si, cs1, ct1);
            const double d_semi = drift(cs0, cs1);
            const double d_total = drift(ct0, ct1);
            const bool ok = cs1 < 1e3 && d_semi < 0.10 && d_total < 0.10;
            pass = pass && ok;
            res.csv_rows.push_back(check_csv_row(
                "norm_equiv_bracket_semi", n, svals[si], cs1, fam.fs.size(), 1e3, ok));
            res.csv_rows.push_back(check_csv_row("norm_equiv_drift_semi", n, svals[si],
                                                 d_semi, fam.fs.size(), 0.10,
                                                 d_semi < 0.10));
            res.csv_rows.push_back(check_csv_row("norm_equiv_drift_total", n, svals[si],
                                                 d_total, fam.fs.size(), 0.10,
                                                 d_total < 0.10));
            detail << " n=" << n << ",s=" << svals[si] << ":C=" << fmt_g17(cs1)
                   << ",drift=" << fmt_g17(d_semi);
        }
    }
    res.pass = pass;
    res.detail = detail.str();
    return res;
}

namespace {

struct GradCms {
    double ii, iii, iv, v;
};

GradCms gradient_cms(const HoloFun& f, const SpaceParams& params, const SupGrid& grid,
                     const QuadRule& ball) {
    GradCms g;
    const double p = params.p();
    g.ii = cm_constant(gradient_measure(f, GradKind::inv_grad, params), p, grid, &ball)
               .constant;
    g.iii = cm_constant(gradient_measure(f, GradKind::grad, params), p, grid, &ball)
                .constant;
    g.iv = cm_constant(gradient_measure(f, GradKind::radial, params), p, grid, &ball)
               .constant;
    g.v = params.n >= 2
              ? cm_constant(gradient_measure(f, GradKind::tangential_sum, params), p,
                            grid, &ball)
                    .constant
              : 0.0;
    return g;
}

} // namespace

CheckResult check_gradient_characterizations(const CheckContext& ctx) {
    CheckResult res;
    res.criterion = 9;
    res.name = "gradient Carleson characterizations";
    res.csv_header = kCheckCsvHeader;
    const int n = ctx.n_override.value_or(2);
    const double s = ctx.s_override.value_or(0.25);
    const SpaceParams params = SpaceParams::make(n, s);
    params.require_gradient_range();
    const TestFamily fam = norm_family(n, ctx.seed, 4, 8);

    auto run = [&](int step, double& c_out, double& worst_v_excess) {
        const SupGrid grid = make_grid(n, 48 * step, 6 * step, 0.1, 1.0, 0, ctx.seed);
        const QuadRule ball = ball_rule(n, ctx.level + step, ctx.seed);
        std::vector<double> ratios;
        worst_v_excess = 0.0;
        for (const HoloFun& f : fam.fs) {
            const GradCms g = gradient_cms(f, params, grid, ball);
            if (g.ii < 1e-9) continue;
            ratios.push_back(g.iii / g.ii);
            ratios.push_back(g.iv / g.ii);
            ratios.push_back(g.iv / std::max(g.iii, 1e-300));
            if (n >= 2) worst_v_excess = std::max(worst_v_excess, g.v / g.ii - 1.0);
        }
        c_out = bracket_of_ratios(ratios);
    };

    double c0, c1, vex0, vex1;
    run(1, c0, vex0);
    run(2, c1, vex1);
    const double d = drift(c0, c1);
    const bool vok = vex1 <= 1e-9; // tangential measure dominated by (ii)
    res.pass = c1 < 1e3 && d < 0.10 && vok;
    res.detail = "C=" + fmt_g17(c1) + " drift=" + fmt_g17(d) +
                 " v_excess=" + fmt_g17(vex1);
    res.csv_rows = {
        check_csv_row("grad_char_bracket", n, s, c1, fam.fs.size(), 1e3, c1 < 1e3),
        check_csv_row("grad_char_drift", n, s, d, fam.fs.size(), 0.10, d < 0.10),
        check_csv_row("grad_char_tangential_dominated", n, s, vex1, fam.fs.size(),
                      1e-9, vok)};
    return res;
}

CheckResult check_canonical_atom(const CheckContext& ctx) {
    CheckResult res;
    res.criterion = 10;
    res.name = "canonical atom bounds";
    res.csv_header = kCheckCsvHeader;
    const double avals[4] = {0.5, 0.7, 0.9, 0.99};
    const double svals[3] = {-0.25, 0.0, 0.25};
    bool pass = true;
    double worst_ratio = 0.0, worst_sharp = 0.0;
    for (int n : {1, 2}) {
        const SupGrid grid =
            make_grid(n, n == 1 ? 64 : 64, 10, n == 1 ? 0.02 : 0.1, 1.0, 0, ctx.seed);
        const QuadRule osc =
            n == 1 ? sphere_rule(1, 6, ctx.seed) : sphere_rule(2, 3 + ctx.level, ctx.seed);
        // Unit-coefficient kernels profiled once; the canonical prefactor is
        // a scalar and scales the norm linearly.
        std::array<CapProfile, 4> profs;
        std::array<double, 4> hardys;
        for (int i = 0; i < 4; ++i) {
            CVec a(n);
            a[0] = cxd{avals[i], 0.0};
            HoloFun g(n);
            g.add_atom(1.0, a, static_cast<double>(n));
            profs[i] = cap_profile(g, grid, osc);
            hardys[i] = hardy2_norm(g, osc);
        }
        for (double s : svals) {
            const SpaceParams params = SpaceParams::make(n, s);
            double lo = INFINITY, hi = 0.0;
            for (int i = 0; i < 4; ++i) {
                const double pref = std::pow(1.0 - avals[i] * avals[i], n - s);
                const double norm =
                    pref * osc_norm_from_profile(profs[i], hardys[i], params).value;
                lo = std::min(lo, norm);
                hi = std::max(hi, norm);
            }
            const double ratio = hi / lo;
            worst_ratio = std::max(worst_ratio, ratio);
            pass = pass && ratio <= 10.0;
            res.csv_rows.push_back(check_csv_row("atom_norm_spread", n, s, ratio, 4,
                                                 10.0, ratio <= 10.0));

            // Exact sharpness value |grad f_a(a)| (1-|a|^2)^{1+s} = n |a|.
            for (int i = 0; i < 4; ++i) {
                CVec a(n);
                a[0] = cxd{avals[i], 0.0};
                const HoloFun fa = canonical_atom(a, s, n);
                const double lhs = std::sqrt(fa.grad_norm_sq(a.span())) *
                                   std::pow(1.0 - avals[i] * avals[i], 1.0 + s);
                const double resid = std::abs(lhs - n * avals[i]);
                worst_sharp = std::max(worst_sharp, resid);
            }
        }
    }
    pass = pass && worst_sharp <= 1e-12;
    res.csv_rows.push_back(check_csv_row("atom_sharpness", 0, 0.0, worst_sharp, 24,
                                         1e-12, worst_sharp <= 1e-12));
    res.pass = pass;
    res.detail =
        "spread=" + fmt_g17(worst_ratio) + " sharpness_resid=" + fmt_g17(worst_sharp);
    return res;
}

CheckResult check_lattice(const CheckContext& ctx) {
    CheckResult res;
    res.criterion = 11;
    res.name = "lattice and synthesis";
    res.csv_header = kCheckCsvHeader;
    const int n = 1;
    const double r = 0.7, rho_max = 0.95, s = 0.25;
    const Lattice lat = generate_lattice(n, r, rho_max, stream_seed(ctx.seed, "lat"));
    const bool sep_ok = lat.stats.min_pairwise_beta >= r / 2.0 - 1e-12;
    const bool cov_ok = lat.stats.covering_fraction >= 0.99;
    const bool overlap_ok = lat.stats.max_overlap_quarter <= 1;

    res.csv_rows.push_back(check_csv_row("lattice_separation", n, 0.0,
                                         lat.stats.min_pairwise_beta, lat.count(),
                                         r / 2.0, sep_ok));
    res.csv_rows.push_back(check_csv_row("lattice_covering", n, 0.0,
                                         lat.stats.covering_fraction,
                                         lat.stats.probes, 0.99, cov_ok));

    // Synthesis membership: ||f||_osc <= C coeff_cm over random phase draws,
    // on the first 40 lattice points.
    const std::size_t natoms = std::min<std::size_t>(lat.count(), 40);
    const std::vector<cxd> centers_flat(lat.points.begin(),
                                        lat.points.begin() + natoms * n);
    Xoshiro256ss rng(stream_seed(ctx.seed, "lattice_draws"));
    const SpaceParams params = SpaceParams::make(n, s);
    auto run = [&](std::size_t centers, std::size_t radii, int sph_level) {
        const SupGrid cm_grid = make_grid(n, 256, 24, 0.02, 1.0, 0, ctx.seed);
        const SupGrid norm_grid = make_grid(n, centers, radii, 0.02, 1.0, 0, ctx.seed);
        const QuadRule sph = sphere_rule(n, sph_level, ctx.seed);
        double cmax = 0.0;
        for (int draw = 0; draw < 10; ++draw) {
            std::vector<cxd> coeffs(natoms);
            for (std::size_t k = 0; k < natoms; ++k) {
                const double phase =
                    draw == 0 ? 0.0 : 2.0 * 3.14159265358979323846 * rng.uniform();
                const double mag =
                    std::pow(1.0 - norm_sq(lat.point(k)), -s) * std::pow(2.0, -(double)k);
                coeffs[k] = mag * cxd{std::cos(phase), std::sin(phase)};
            }
            const HoloFun f = synthesize(coeffs, centers_flat, n, 2.0);
            const double norm = campanato_norm_osc(f, params, norm_grid, sph).value;
            const double ccm =
                coeff_cm(coeffs, centers_flat, n, s, cm_grid, CoeffWeight::dimension)
                    .constant;
            if (ccm > 0.0) cmax = std::max(cmax, norm / ccm);
        }
        return cmax;
    };
    const double c0 = run(64, 12, 5);
    Xoshiro256ss rng2(stream_seed(ctx.seed, "lattice_draws"));
    rng = rng2; // same draws for the refined pass
    const double c1 = run(128, 24, 6);
    const double d = drift(c0, c1);
    const bool memb_ok = std::isfinite(c1) && d < 0.10;
    res.csv_rows.push_back(
        check_csv_row("lattice_membership_C", n, s, c1, 10, 1e3, std::isfinite(c1)));
    res.csv_rows.push_back(check_csv_row("lattice_membership_drift", n, s, d, 10, 0.10,
                                         d < 0.10));
    res.pass = sep_ok && cov_ok && overlap_ok && memb_ok;
    res.detail = "count=" + std::to_string(lat.count()) +
                 " minsep=" + fmt_g17(lat.stats.min_pairwise_beta) +
                 " covering=" + fmt_g17(lat.stats.covering_fraction) +
                 " C=" + fmt_g17(c1) + " drift=" + fmt_g17(d);
    return res;
}

CheckResult check_tent(const CheckContext& ctx) {
    CheckResult res;
    res.criterion = 12;
    res.name = "tent-space embedding";
    res.csv_header = kCheckCsvHeader;
    const int n = ctx.n_override.value_or(1);
    const double s = ctx.s_override.value_or(0.25);
    const SpaceParams params = SpaceParams::make(n, s);
    params.require_gradient_range();
    Xoshiro256ss rng(stream_seed(ctx.seed, "tent"));

    // Family: canonical atoms plus polynomials; 10 random discrete measures.
    std::vector<HoloFun> family;
    for (double av : {0.5, 0.7, 0.9, 0.95}) {
        CVec a(n);
        a[0] = cxd{av, 0.0};
        family.push_back(canonical_atom(a, s, n));
    }
    for (int i = 0; i < 6; ++i) family.push_back(random_poly(n, 4, rng));

    std::vector<MeasureSpec> measures;
    for (int i = 0; i < 10; ++i) {
        std::vector<double> w(8);
        std::vector<cxd> pts;
        for (int k = 0; k < 8; ++k) {
            w[k] = rng.uniform_pos();
            const CVec a = random_interior(n, rng, 0.9);
            pts.insert(pts.end(), a.v.begin(), a.v.end());
        }
        measures.push_back(MeasureSpec::discrete(n, std::move(w), std::move(pts)));
    }

    auto run = [&](std::size_t centers, std::size_t radii, int sph_level) {
        const SupGrid grid = make_grid(n, centers, radii, 0.02, 1.0, 0, ctx.seed);
        const QuadRule sph = sphere_rule(n, sph_level, ctx.seed);
        double cmax = 0.0;
        for (const HoloFun& f : family) {
            const double fnorm = campanato_norm_osc(f, params, grid, sph).value;
            for (const MeasureSpec& mu : measures) {
                const double tent = tent_norm(f, s, mu, grid).constant;
                const double cm1 = cm_constant(mu, 1.0, grid).constant;
                if (cm1 > 0.0 && fnorm > 0.0)
                    cmax = std::max(cmax, tent / (cm1 * fnorm));
            }
        }
        return cmax;
    };
    const double c0 = run(256, 24, 5);
    const double c1 = run(512, 48, 6);
    const double d = drift(c0, c1);

    // f == 1 collapses the tent norm to the p = 1 - 2s/n Carleson constant.
    const SupGrid grid = make_grid(n, 256, 24, 0.02, 1.0, 0, ctx.seed);
    double worst_ident = 0.0;
    const HoloFun one = HoloFun::constant(n, 1.0);
    for (const MeasureSpec& mu : measures) {
        const double tent = tent_norm(one, s, mu, grid).constant;
        const double cm = cm_constant(mu, 1.0 - 2.0 * s / n, grid).constant;
        worst_ident = std::max(worst_ident, std::abs(tent - cm));
    }
    const bool ident_ok = worst_ident <= 1e-12;
    res.pass = std::isfinite(c1) && d < 0.10 && ident_ok;
    res.detail = "C=" + fmt_g17(c1) + " drift=" + fmt_g17(d) +
                 " const_identity=" + fmt_g17(worst_ident);
    res.csv_rows = {
        check_csv_row("tent_embedding_C", n, s, c1, family.size() * measures.size(),
                      1e3, std::isfinite(c1)),
        check_csv_row("tent_embedding_drift", n, s, d, 10, 0.10, d < 0.10),
        check_csv_row("tent_cm_identity", n, s, worst_ident, measures.size(), 1e-12,
                      ident_ok)};
    return res;
}

CheckResult check_carleson_oracle(const CheckContext& ctx) {
    CheckResult res;
    res.criterion = 7;
    res.name = "Carleson constants vs oracle";
    res.csv_header = kCheckCsvHeader;
    res.aux_csv_name = "carleson_constants";
    res.aux_csv_header = kCarlesonCsvHeader;
    bool pass = true;
    std::ostringstream detail;
    Xoshiro256ss rng(stream_seed(ctx.seed, "carleson"));

    for (int n : {1, 2}) {
        const double p = 1.0, h = 0.1;
        const SupGrid grid = make_grid(n, 256, 24, 0.02, 1.0, 64, ctx.seed);
        // Point mass at (1-h) e_1; e_1 is a grid center by construction.
        std::vector<cxd> pt(n, cxd{0.0, 0.0});
        pt[0] = cxd{1.0 - h, 0.0};
        const MeasureSpec mu = MeasureSpec::discrete(n, {1.0}, pt);
        const double cm = cm_constant(mu, p, grid).constant;

        // Brute-force oracle: plain scan over a fine (zeta, r) grid.
        const SupGrid fine =
            make_grid(n, n == 1 ? 2048 : 8192, 1, 1.0, 1.0, 0, ctx.seed ^ 0x9e37);
        double oracle = 0.0;
        for (std::size_t c = 0; c < fine.center_count(); ++c) {
            const double d =
                std::abs(1.0 - herm_inner(mu.atom(0), fine.center(c)));
            for (int j = 0; j < 512; ++j) {
                const double rr = 0.005 * std::pow(200.0, j / 511.0);
                if (d < rr) oracle = std::max(oracle, 1.0 / std::pow(rr, n * p));
            }
        }
        oracle = std::sqrt(oracle);
        const double rel = std::abs(cm - oracle) / oracle;
        pass = pass && rel <= 0.05;
        res.csv_rows.push_back(check_csv_row("cm_point_mass_vs_oracle", n, 0.0, rel, 1,
                                             0.05, rel <= 0.05));
        res.aux_csv_rows.push_back(
            carleson_csv_row("point_mass_n" + std::to_string(n), p, cm, h, 0));
        detail << " n=" << n << ":cm=" << fmt_g17(cm) << ",oracle=" << fmt_g17(oracle);

        // Dual form vs direct constant across random discrete measures.
        auto bracket_at = [&](std::size_t centers, std::size_t radii,
                              Xoshiro256ss& gen) {
            const SupGrid g2 = make_grid(n, centers, radii, 0.02, 1.0, 64, ctx.seed);
            const std::vector<cxd> zs = g2.a_samples();
            std::vector<double> ratios;
            for (int trial = 0; trial < 20; ++trial) {
                std::vector<double> w(10);
                std::vector<cxd> pts;
                for (int k = 0; k < 10; ++k) {
                    w[k] = 0.1 + gen.uniform();
                    const CVec a = random_interior(n, gen, 0.95);
                    pts.insert(pts.end(), a.v.begin(), a.v.end());
                }
                const MeasureSpec m = MeasureSpec::discrete(n, std::move(w),
                                                            std::move(pts));
                const double direct = cm_constant(m, 1.0, g2).constant;
                const double dual = cm_dual_constant(m, 1.0, 1.0, zs).constant;
                if (direct > 0.0) ratios.push_back(dual / direct);
            }
            return bracket_of_ratios(ratios);
        };
        Xoshiro256ss gen_a(stream_seed(ctx.seed, "carleson_dual"));
        Xoshiro256ss gen_b(stream_seed(ctx.seed, "carleson_dual"));
        const double cb = bracket_at(256, 24, gen_a);
        const double cf = bracket_at(512, 48, gen_b);
        const double d = drift(cb, cf);
        pass = pass && cf <= 20.0 && d < 0.10;
        res.csv_rows.push_back(check_csv_row("cm_dual_bracket", n, 0.0, cf, 20, 20.0,
                                             cf <= 20.0));
        res.csv_rows.push_back(
            check_csv_row("cm_dual_bracket_drift", n, 0.0, d, 20, 0.10, d < 0.10));
        detail << ",dualC=" << fmt_g17(cf) << ",drift=" << fmt_g17(d);
    }
    res.pass = pass;
    res.detail = detail.str();
    return res;
}

CheckResult check_tab_preservation(const CheckContext& ctx) {
    CheckResult res;
    res.criterion = 13;
    res.name = "T_{a,b} Carleson preservation";
    res.csv_header = kCheckCsvHeader;
    const int n = 2;
    struct Tuple {
        double p, eta, a, b;
    };
    const Tuple tuples[5] = {{1.0, 1.0, 0.0, 2.0},
                             {1.0, 1.0, -0.4, 1.5},
                             {0.5, 0.5, 0.0, 1.0},
                             {1.2, 1.0, 0.5, 2.5},
                             {0.8, 1.2, -0.3, 1.6}};

    // Input profile |grad g|, g a fixed interior kernel.
    CVec a0(n);
    a0[0] = cxd{0.6, 0.0};
    HoloFun g(n);
    g.add_atom(1.0, a0, static_cast<double>(n));
    const auto f_in = [g](std::span<const cxd> z) {
        return std::sqrt(g.grad_norm_sq(z));
    };

    // Shared tube grid; stability is probed by doubling the outer sampling
    // of both measures (the inner operator rule is part of the operator's
    // definition here and stays fixed). Radii start high enough that every
    // tube clears the node floor at both outer levels, so the two passes
    // score the same candidate set.
    const SupGrid grid = make_grid(n, 48, 6, 0.35, 1.0, 0, ctx.seed);
    auto run = [&](int outer_level, double& cmax) {
        const QuadRule outer = ball_rule(n, outer_level, ctx.seed);
        cmax = 0.0;
        for (const Tuple& t : tuples) {
            const QuadRule inner =
                power_ball_rule_custom(n, t.b - 1.0, 16, 512, ctx.seed);
            const std::vector<double> tf =
                tab_apply(f_in, t.a, t.b, t.p, t.eta, inner, outer);
            std::vector<double> in_vals(outer.count()), out_vals(outer.count());
            for (std::size_t j = 0; j < outer.count(); ++j) {
                const auto z = outer.node(j);
                const double fac = 1.0 - norm_sq(z);
                // The kernel integral is not resolvable by the fixed inner
                // rule once 1-|z|^2 falls under its boundary gap; both
                // measures are truncated there, identically at every level.
                if (fac < 0.02) continue;
                const double v = f_in(z);
                in_vals[j] = v * v * std::pow(fac, t.eta);
                out_vals[j] = tf[j] * tf[j] * std::pow(fac, 2.0 * t.a + t.eta);
            }
            const double cin = cm_constant_sampled(in_vals, t.p, grid, outer).constant;
            const double cout =
                cm_constant_sampled(out_vals, t.p, grid, outer).constant;
            if (cin > 0.0) cmax = std::max(cmax, cout / cin);
        }
    };
    double c0, c1;
    run(ctx.level, c0);
    run(ctx.level + 1, c1);
    const double d = drift(c0, c1);
    res.pass = std::isfinite(c1) && d < 0.10;
    res.detail = "C=" + fmt_g17(c1) + " drift=" + fmt_g17(d);
    res.csv_rows = {
        check_csv_row("tab_preservation_C", n, 0.0, c1, 5, 1e3, std::isfinite(c1)),
        check_csv_row("tab_preservation_drift", n, 0.0, d, 5, 0.10, d < 0.10)};

    // Hypothesis checking is strict.
    bool rejected = false;
    try {
        check_tab_hypotheses(n, 2.0, 1.0, 0.0, 2.0); // p outside (0, 1.5)
    } catch (const std::domain_error&) {
        rejected = true;
    }
    res.pass = res.pass && rejected;
    res.csv_rows.push_back(
        check_csv_row("tab_hypothesis_rejection", n, 0.0, rejected ? 0.0 : 1.0, 1, 0.5,
                      rejected));
    return res;
}

CheckResult check_forelli_rudin(const CheckContext& ctx) {
    CheckResult res;
    res.criterion = 14;
    res.name = "Forelli-Rudin bounds";
    res.csv_header = kCheckCsvHeader;
    bool pass = true;
    std::ostringstream detail;

    struct Tuple {
        double s, r, t;
        CVec z, w;
    };
    auto sample_case = [&](int n, int want_case, Xoshiro256ss& rng) -> Tuple {
        const double margin = 0.05;
        for (int it = 0; it < 100000; ++it) {
            const double s = -0.9 + 2.9 * rng.uniform();
            const double r = 6.0 * rng.uniform();
            const double t = 6.0 * rng.uniform();
            if (!(r + t - s > n + 1.0 + margin)) continue;
            const double dr = r - s - (n + 1.0), dt = t - s - (n + 1.0);
            int c;
            if (dr < -margin && dt < -margin)
                c = 1;
            else if (dr > margin && dt < -margin)
                c = 2;
            else if (dr > margin && dt > margin)
                c = 3;
            else
                continue;
            if (c != want_case) continue;
            return {s, r, t, random_interior(n, rng, 0.8), random_interior(n, rng, 0.8)};
        }
        throw std::runtime_error("forelli_rudin: sampling failed");
    };

    for (int n : {1, 2}) {
        Xoshiro256ss rng(stream_seed(ctx.seed, "forelli" + std::to_string(n)));
        for (int want_case = 1; want_case <= 3; ++want_case) {
            std::vector<Tuple> tuples;
            for (int i = 0; i < 50; ++i) tuples.push_back(sample_case(n, want_case, rng));
            auto max_ratio = [&](int nr, std::size_t ndir) {
                double worst = 0.0;
                for (const Tuple& tp : tuples) {
                    const QuadRule rule =
                        power_ball_rule_custom(n, tp.s, nr, ndir, ctx.seed);
                    const FrCheck fr =
                        forelli_rudin_check(tp.s, tp.r, tp.t, tp.z, tp.w, rule);
                    worst = std::max(worst, fr.ratio);
                }
                return worst;
            };
            const double c0 = max_ratio(24, n == 1 ? 64 : 512);
            const double c1 = max_ratio(48, n == 1 ? 128 : 1024);
            const double d = drift(c0, c1);
            const bool ok = std::isfinite(c1) && d < 0.10;
            pass = pass && ok;
            res.csv_rows.push_back(check_csv_row(
                "forelli_rudin_case" + std::to_string(want_case), n, 0.0, c1, 50, 1e4,
                ok));
            detail << " n=" << n << ",case" << want_case << ":C=" << fmt_g17(c1)
                   << ",drift=" << fmt_g17(d);
        }

        // Swap symmetry: (z,r) <-> (w,t) leaves the integral invariant.
        Xoshiro256ss rng2(stream_seed(ctx.seed, "forelli_swap"));
        double worst_swap = 0.0;
        for (int i = 0; i < 20; ++i) {
            const Tuple tp = sample_case(n, 3, rng2);
            const QuadRule rule = power_ball_rule_custom(n, tp.s, 24, n == 1 ? 64 : 512,
                                                         ctx.seed);
            const FrCheck fwd = forelli_rudin_check(tp.s, tp.r, tp.t, tp.z, tp.w, rule);
            const FrCheck rev = forelli_rudin_check(tp.s, tp.t, tp.r, tp.w, tp.z, rule);
            worst_swap = std::max(worst_swap,
                                  std::abs(fwd.lhs - rev.lhs) / std::max(fwd.lhs, 1e-300));
        }
        pass = pass && worst_swap <= 1e-12;
        res.csv_rows.push_back(check_csv_row("forelli_rudin_swap", n, 0.0, worst_swap,
                                             20, 1e-12, worst_swap <= 1e-12));
    }
    res.pass = pass;
    res.detail = detail.str();
    return res;
}

} // namespace holoball::detail
