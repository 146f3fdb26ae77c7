#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "holoball/lattice.hpp"
#include "holoball/norms.hpp"
#include "holoball/rng.hpp"

using namespace holoball;

namespace {

HoloFun coord(int n, int k) { return HoloFun::coordinate(n, k); }

} // namespace

TEST_CASE("regime classification follows the structure table") {
    CHECK(regime(SpaceParams::make(1, 0.0)) == Regime::bmoa);
    CHECK(regime(SpaceParams::make(2, 1.0)) == Regime::hardy);
    CHECK(regime(SpaceParams::make(2, -0.25)) == Regime::lipschitz);
    CHECK(regime(SpaceParams::make(2, 0.3)) == Regime::morrey);
    CHECK_THROWS_AS((void)SpaceParams::make(1, 0.9), std::domain_error);
    CHECK_THROWS_AS((void)SpaceParams::make(1, -1.0), std::domain_error);

    CHECK(regime_label(Regime::bmoa) == "BMOA");
    CHECK(regime_label(Regime::hardy) == "Hardy");

    // Qp side: p = 1 - 2s/n.
    CHECK(qp_regime(2, 1.0) == QpRegime::bmoa);
    CHECK(qp_regime(2, 2.0) == QpRegime::constants); // p >= n/(n-1) = 2
    CHECK(qp_regime(2, 1.2) == QpRegime::bloch);
    CHECK(qp_regime(2, 0.7) == QpRegime::fractional_scale);
    CHECK(qp_regime(2, 0.4) == QpRegime::constants);
    CHECK(qp_regime(1, 3.0) == QpRegime::bloch); // n/(n-1) = infinity
}

TEST_CASE("hardy norm of monomials") {
    const QuadRule s1 = sphere_rule(1, 3, 3);
    for (int k : {1, 3}) {
        HoloFun f(1);
        f.add_poly(1.0, MultiIndex{k});
        CHECK(hardy2_norm(f, s1) == doctest::Approx(1.0).epsilon(1e-12));
    }
    const QuadRule s2 = sphere_rule(2, 3, 3);
    CHECK(hardy2_norm(coord(2, 0), s2) ==
          doctest::Approx(std::sqrt(0.5)).epsilon(2e-3));
    CHECK(hardy2_norm(HoloFun::zero(2), s2) == 0.0);
}

TEST_CASE("hardy radial scan is monotone for holomorphic functions") {
    const QuadRule s1 = sphere_rule(1, 3, 5);
    HoloFun f(1);
    f.add_poly(cxd{1, 0.5}, MultiIndex{1});
    f.add_poly(cxd{0, -0.3}, MultiIndex{3});
    const double radii[] = {0.2, 0.4, 0.6, 0.8, 0.95, 1.0};
    const auto scan = hardy2_radial_scan(f, s1, radii);
    for (std::size_t i = 1; i < scan.size(); ++i) CHECK(scan[i] >= scan[i - 1] - 1e-13);
}

TEST_CASE("oscillation norm of a constant is its modulus") {
    const SupGrid grid = make_grid(1, 32, 8, 0.05, 1.0, 8, 7);
    const QuadRule s1 = sphere_rule(1, 3, 7);
    const HoloFun f = HoloFun::constant(1, cxd{3.0, 4.0});
    const auto rep = campanato_norm_osc(f, SpaceParams::make(1, 0.25), grid, s1);
    CHECK(rep.seminorm <= 1e-10);
    CHECK(rep.value == doctest::Approx(5.0).epsilon(1e-10));
}

TEST_CASE("s = n/2 oscillation seminorm is dominated by the Hardy norm") {
    const SupGrid grid = make_grid(1, 32, 8, 0.05, 1.0, 8, 9);
    const QuadRule s1 = sphere_rule(1, 4, 9);
    Xoshiro256ss rng(71);
    for (int trial = 0; trial < 5; ++trial) {
        HoloFun f(1);
        for (int d = 0; d <= 4; ++d)
            f.add_poly(cxd{rng.uniform() - 0.5, rng.uniform() - 0.5}, MultiIndex{d});
        const auto rep = campanato_norm_osc(f, SpaceParams::make(1, 0.5), grid, s1);
        CHECK(rep.seminorm <= 2.0 * rep.hardy_part + 1e-9);
    }
}

TEST_CASE("canonical atom oscillation norm is stable under grid refinement") {
    CVec a{cxd{0.9, 0}};
    const HoloFun f = canonical_atom(a, 0.25, 1);
    const SpaceParams params = SpaceParams::make(1, 0.25);
    const QuadRule s1 = sphere_rule(1, 4, 11);
    const auto coarse =
        campanato_norm_osc(f, params, make_grid(1, 64, 12, 0.02, 1.0, 0, 11), s1);
    const auto fine =
        campanato_norm_osc(f, params, make_grid(1, 128, 24, 0.02, 1.0, 0, 11), s1);
    CHECK(std::isfinite(coarse.value));
    CHECK(std::abs(fine.value - coarse.value) <= 0.10 * coarse.value);
}

TEST_CASE("mobius norm worked values") {
    // a = 0 term for n = 1, f = z, s = 0 gives exactly 1.
    const QuadRule s1 = sphere_rule(1, 4, 13);
    const ASampleProfile prof =
        mobius_profile(coord(1, 0), std::vector<cxd>{cxd{0, 0}}, 1, s1);
    CHECK(prof.integral[0] == doctest::Approx(1.0).epsilon(1e-12));

    // Constants have vanishing Mobius seminorm.
    const SupGrid grid = make_grid(1, 16, 6, 0.05, 1.0, 8, 13);
    const auto rep = campanato_norm_mobius(HoloFun::constant(1, 2.0),
                                           SpaceParams::make(1, 0.0), grid, s1);
    CHECK(rep.value <= 1e-12);

    // For f = z the supremum over a at s = 0 is 1 (attained at a = 0).
    const auto repz =
        campanato_norm_mobius(coord(1, 0), SpaceParams::make(1, 0.0), grid, s1);
    CHECK(repz.value == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(repz.value <= 1.0 + 1e-9);
}

TEST_CASE("green profile worked value at the origin") {
    // n = 1, f = z, a = 0: int log(1/|z|) dnu = 1/2 (minus the tiny excluded core).
    const QuadRule b1 = ball_rule(1, 4, 17);
    const ASampleProfile prof = green_profile(coord(1, 0),
                                              std::vector<cxd>{cxd{0, 0}}, 1, b1,
                                              /*sing_cutoff=*/0.005);
    CHECK(prof.integral[0] == doctest::Approx(0.5).epsilon(2e-3));
    CHECK(prof.excluded_bound < 0.01);
    CHECK(prof.excluded_bound > 0.0);
}

TEST_CASE("qp integral worked value and norm") {
    const QuadRule b1 = ball_rule(1, 4, 19);
    const std::vector<cxd> origin{cxd{0, 0}};
    double excl = 0.0;
    const double v = qp_integral(coord(1, 0), 1.0, origin, b1, 0.005, &excl);
    CHECK(v == doctest::Approx(0.5).epsilon(2e-3));
    CHECK(excl < 0.02);

    const auto rep = qp_norm(coord(1, 0), 1.0, origin, 1, b1, 0.005);
    CHECK(rep.value == doctest::Approx(std::sqrt(0.5)).epsilon(2e-3));

    CHECK(qp_norm(HoloFun::constant(1, 4.0), 1.0, origin, 1, b1).value == 0.0);
    CHECK_THROWS_AS((void)qp_integral(coord(1, 0), 0.0, origin, b1), std::domain_error);
}

TEST_CASE("qp norms comparable across p in the Bloch range") {
    const QuadRule b2 = ball_rule(2, 2, 23);
    const SupGrid grid = make_grid(2, 8, 4, 0.2, 1.0, 8, 23);
    const std::vector<cxd> omegas = grid.a_samples();
    CVec a{cxd{0.6, 0}, cxd{0.2, 0.1}};
    const HoloFun f = canonical_atom(a, 0.25, 2);
    const double q10 = qp_norm(f, 1.0, omegas, 2, b2).value;
    const double q15 = qp_norm(f, 1.5, omegas, 2, b2).value;
    CHECK(q10 > 0.0);
    CHECK(q15 > 0.0);
    const double ratio = q10 / q15;
    CHECK(ratio > 0.2);
    CHECK(ratio < 5.0);
}

TEST_CASE("bloch and hinf sampled norms") {
    const std::vector<cxd> samples = shell_samples(2, 128, 29);
    // f = z1, alpha = 1: sup (1-|z|^2)|grad f| = 1 at z = 0.
    CHECK(bloch_alpha_norm(coord(2, 0), 1.0, samples) ==
          doctest::Approx(1.0).epsilon(1e-12));
    // hinf of z1 z2 on B_2 is 1/2 at |z1| = |z2| = 2^{-1/2}.
    const HoloFun f = HoloFun::monomial(2, 1.0, MultiIndex{1, 1});
    CHECK(hinf_norm(f, samples) == doctest::Approx(0.5).epsilon(2e-2));
    CHECK(hinf_norm(f, samples) <= 0.5 + 1e-12);
    // constants: bloch 0, hinf |c|.
    const HoloFun c = HoloFun::constant(2, cxd{0, -2});
    CHECK(bloch_alpha_norm(c, 1.0, samples) == 0.0);
    CHECK(hinf_norm(c, samples) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("growth ratio and the sharpness value") {
    const int n = 2;
    const double s = 0.25;
    CVec a(n);
    a[0] = cxd{0.9, 0};
    const HoloFun fa = canonical_atom(a, s, n);
    // |grad f_a(a)| (1-|a|^2)^{1+s} = n |a| exactly.
    const double lhs =
        std::sqrt(fa.grad_norm_sq(a.span())) * std::pow(1.0 - 0.81, 1.0 + s);
    CHECK(lhs == doctest::Approx(n * 0.9).epsilon(1e-13));
    CHECK(std::abs(lhs - 1.8) <= 1e-12);

    const std::vector<cxd> samples = shell_samples(n, 64, 31, false);
    const double ratio = growth_ratio(fa, SpaceParams::make(n, s), samples, 2.0);
    CHECK(ratio > 0.0);
    CHECK_THROWS_WITH_AS((void)growth_ratio(HoloFun::constant(n, 1.0),
                                            SpaceParams::make(n, s), samples, 0.0),
                         doctest::Contains("undefined ratio"), std::domain_error);
}

TEST_CASE("norms are absolutely homogeneous and satisfy the triangle inequality") {
    const SupGrid grid = make_grid(1, 24, 6, 0.05, 1.0, 8, 37);
    const QuadRule s1 = sphere_rule(1, 3, 37);
    const SpaceParams params = SpaceParams::make(1, 0.25);
    Xoshiro256ss rng(37);
    for (int trial = 0; trial < 50; ++trial) {
        HoloFun f(1), g(1);
        for (int d = 0; d <= 3; ++d) {
            f.add_poly(cxd{rng.uniform() - 0.5, rng.uniform() - 0.5}, MultiIndex{d});
            g.add_poly(cxd{rng.uniform() - 0.5, rng.uniform() - 0.5}, MultiIndex{d});
        }
        const cxd c{1.7, -0.4};
        const auto rf = campanato_norm_osc(f, params, grid, s1);
        const auto rcf = campanato_norm_osc(f.scaled(c), params, grid, s1);
        CHECK(rcf.seminorm == doctest::Approx(std::abs(c) * rf.seminorm).epsilon(1e-10));
        CHECK(rcf.value == doctest::Approx(std::abs(c) * rf.value).epsilon(1e-10));

        const auto rg = campanato_norm_osc(g, params, grid, s1);
        const auto rsum = campanato_norm_osc(f.plus(g), params, grid, s1);
        CHECK(rsum.value <= rf.value + rg.value + 1e-10);

        const auto mf = campanato_norm_mobius(f, params, grid, s1);
        const auto mcf = campanato_norm_mobius(f.scaled(c), params, grid, s1);
        CHECK(mcf.value == doctest::Approx(std::abs(c) * mf.value).epsilon(1e-10));
    }
}

TEST_CASE("sampled suprema never decrease on grid supersets") {
    const QuadRule s1 = sphere_rule(1, 3, 41);
    const SpaceParams params = SpaceParams::make(1, 0.0);
    CVec a{cxd{0.8, 0.1}};
    const HoloFun f = canonical_atom(a, 0.0, 1);

    SupGrid small = make_grid(1, 16, 5, 0.05, 1.0, 4, 41);
    SupGrid big = small;
    const SupGrid extra = make_grid(1, 32, 5, 0.03, 0.9, 12, 43);
    big.centers.insert(big.centers.end(), extra.centers.begin(), extra.centers.end());
    big.radii.insert(big.radii.end(), extra.radii.begin(), extra.radii.end());
    std::sort(big.radii.begin(), big.radii.end());
    big.interior.insert(big.interior.end(), extra.interior.begin(),
                        extra.interior.end());

    const auto small_osc = campanato_norm_osc(f, params, small, s1);
    const auto big_osc = campanato_norm_osc(f, params, big, s1);
    CHECK(big_osc.seminorm >= small_osc.seminorm - 1e-13);

    const auto small_mob = campanato_norm_mobius(f, params, small, s1);
    const auto big_mob = campanato_norm_mobius(f, params, big, s1);
    CHECK(big_mob.value >= small_mob.value - 1e-13);
}

TEST_CASE("hypothesis ranges are enforced") {
    const SupGrid grid = make_grid(1, 8, 4, 0.1, 1.0, 4, 43);
    const QuadRule s1 = sphere_rule(1, 2, 43);
    const QuadRule b1 = ball_rule(1, 1, 43);
    const HoloFun f = coord(1, 0);
    // Mobius/Green need s in (-1/2, n/2]; the oscillation norm allows (-1, n/2].
    CHECK_THROWS_AS(
        (void)campanato_norm_mobius(f, SpaceParams::make(1, -0.75), grid, s1),
        std::domain_error);
    CHECK_THROWS_AS(
        (void)campanato_norm_green(f, SpaceParams::make(1, -0.75), grid, b1),
        std::domain_error);
    CHECK_NOTHROW((void)campanato_norm_osc(f, SpaceParams::make(1, -0.75), grid, s1));
}
