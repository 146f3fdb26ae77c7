#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>

#include "holoball/integrate.hpp"
#include "holoball/quadrule.hpp"
#include "holoball/rng.hpp"

using namespace holoball;

namespace {

Integrand monomial_sq(std::vector<int> m) {
    return [m](std::span<const cxd> z) {
        double p = 1.0;
        for (std::size_t j = 0; j < m.size(); ++j) p *= pow_i(std::norm(z[j]), m[j]);
        return cxd{p, 0.0};
    };
}

} // namespace

TEST_CASE("gauss-jacobi weights integrate the beta density") {
    for (double alpha : {0.0, -0.5, 1.5}) {
        for (int n : {1, 2, 3}) {
            std::vector<double> u, w;
            gauss_jacobi01(24, alpha, n - 1.0, u, w);
            double sum = 0.0, sum_u = 0.0;
            for (int i = 0; i < 24; ++i) {
                sum += w[i];
                sum_u += w[i] * u[i];
            }
            const double b0 = std::exp(std::lgamma(static_cast<double>(n)) +
                                       std::lgamma(alpha + 1.0) -
                                       std::lgamma(n + alpha + 1.0));
            const double b1 = std::exp(std::lgamma(n + 1.0) + std::lgamma(alpha + 1.0) -
                                       std::lgamma(n + alpha + 2.0));
            CHECK(sum == doctest::Approx(b0).epsilon(1e-13));
            CHECK(sum_u == doctest::Approx(b1).epsilon(1e-13));
        }
    }
}

TEST_CASE("circle rule integrates characters exactly") {
    const QuadRule rule = sphere_rule(1, 1, 42);
    rule.validate();
    for (int k = 1; k <= 5; ++k) {
        const auto r = integrate(
            [k](std::span<const cxd> z) {
                cxd p{1.0, 0.0};
                for (int i = 0; i < k; ++i) p *= z[0];
                return p;
            },
            rule);
        CHECK(std::abs(r.value) <= 1e-14);
    }
}

TEST_CASE("sphere monomial integrals match the factorial oracle") {
    // oracle: (n-1)! m! / (n-1+|m|)!
    CHECK(sphere_monomial_sq_integral(std::vector<int>{1, 0}) ==
          doctest::Approx(0.5).epsilon(1e-14));
    CHECK(sphere_monomial_sq_integral(std::vector<int>{1, 1}) ==
          doctest::Approx(1.0 / 6.0).epsilon(1e-14));

    const QuadRule rule = sphere_rule(2, 3, 7);
    rule.validate();
    for (auto m : {std::vector<int>{1, 0}, {2, 0}, {1, 1}, {3, 1}}) {
        const auto r = integrate(monomial_sq(m), rule);
        const double oracle = sphere_monomial_sq_integral(m);
        CHECK(std::abs(r.value.real() - oracle) <= 3.0 * r.err_est);
    }
}

TEST_CASE("ball monomial integrals match the factorial oracle") {
    CHECK(ball_monomial_sq_integral(std::vector<int>{1}) ==
          doctest::Approx(0.5).epsilon(1e-14));
    const QuadRule b1 = ball_rule(1, 2, 5);
    b1.validate();
    const auto v1 = integrate(monomial_sq({1}), b1);
    CHECK(v1.value.real() == doctest::Approx(0.5).epsilon(1e-10));

    const QuadRule b2 = ball_rule(2, 3, 5);
    b2.validate();
    for (auto m : {std::vector<int>{1, 0}, {2, 1}}) {
        const auto r = integrate(monomial_sq(m), b2);
        CHECK(std::abs(r.value.real() - ball_monomial_sq_integral(m)) <=
              3.0 * std::max(r.err_est, 1e-6));
    }
}

TEST_CASE("weighted integrals") {
    const QuadRule b1 = ball_rule(1, 2, 5);
    // int_{B_1} (1-|z|^2) dnu = 1/2
    const auto r = integrate([](std::span<const cxd>) { return cxd{1.0, 0.0}; }, b1,
                             Weight::power(1.0));
    CHECK(r.value.real() == doctest::Approx(0.5).epsilon(1e-10));

    // g == 1, no weight -> exactly the weight sum = 1.
    const auto one = integrate([](std::span<const cxd>) { return cxd{1.0, 0.0}; }, b1);
    CHECK(one.value.real() == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("power-folded rules agree with pointwise power weights") {
    const QuadRule plain = ball_rule(2, 2, 9);
    const QuadRule folded = power_ball_rule(2, 1.5, 1, 9);
    folded.validate();
    auto g = [](std::span<const cxd> z) { return cxd{1.0 + 0.3 * z[0].real(), 0.0}; };
    // Same requested weight through both rules: the folded radial factor is
    // exact where the plain rule samples it.
    const auto a = integrate(g, plain, Weight::power(1.5));
    const auto b = integrate(g, folded, Weight::power(1.5));
    CHECK(a.value.real() == doctest::Approx(b.value.real()).epsilon(5e-3));
    // A different requested power corrects pointwise on the folded rule.
    const auto c = integrate(g, folded, Weight::power(2.5));
    const auto d = integrate(g, plain, Weight::power(2.5));
    CHECK(c.value.real() == doctest::Approx(d.value.real()).epsilon(5e-3));
    // With the exactly matching weight the folded value is near machine
    // precision: int (1-|z|^2)^{1.5} dnu = 2 B(2, 2.5).
    const auto e = integrate([](std::span<const cxd>) { return cxd{1.0, 0.0}; },
                             folded, Weight::power(1.5));
    const double exact = 2.0 * std::exp(std::lgamma(2.0) + std::lgamma(2.5) -
                                        std::lgamma(4.5));
    CHECK(e.value.real() == doctest::Approx(exact).epsilon(1e-12));
}

TEST_CASE("lambda weight requires a declared decay exponent") {
    CHECK_THROWS_AS(Weight::lambda(0.0), std::invalid_argument);
    CHECK_THROWS_AS(Weight::lambda(-1.0), std::invalid_argument);
    const QuadRule b1 = ball_rule(1, 2, 5);
    // Integrand with genuine decay (1-|z|^2)^{n+1}: integral of (1-|z|^2)^0...
    // under lambda weight equals int dnu = 1 for n = 1? No: (1-|z|^2)^{n+1} dlambda = dnu.
    const auto ok = integrate(
        [](std::span<const cxd> z) {
            return cxd{pow_i(1.0 - norm_sq(z), 2), 0.0};
        },
        b1, Weight::lambda(1.0));
    CHECK(ok.value.real() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("divergent lambda integrand is flagged under refinement") {
    // (1-|z|^2)^n dlambda = (1-|z|^2)^{-1} dnu diverges for n = 1.
    const QuadRule coarse = ball_rule(1, 1, 5);
    const QuadRule fine = ball_rule(1, 4, 5);
    const bool diverges = refinement_divergence_probe(
        [](std::span<const cxd> z) { return cxd{pow_i(1.0 - norm_sq(z), 1), 0.0}; },
        coarse, fine, Weight::lambda(1e-9));
    CHECK(diverges);
    const bool fine_ok = refinement_divergence_probe(
        [](std::span<const cxd> z) { return cxd{pow_i(1.0 - norm_sq(z), 2), 0.0}; },
        coarse, fine, Weight::lambda(1.0));
    CHECK_FALSE(fine_ok);
}

TEST_CASE("cap integration: full cap equals the sphere integral") {
    for (int n : {1, 2}) {
        const QuadRule rule = sphere_rule(n, n == 1 ? 3 : 2, 11);
        CVec zeta(n);
        zeta[0] = cxd{1.0, 0.0};
        const TubeSpec whole(zeta, 2.0);
        auto g = [](std::span<const cxd> z) { return cxd{std::norm(z[0]), 0.0}; };
        const auto full = integrate(g, rule);
        const auto cap = integrate_cap(g, whole, rule);
        CHECK(cap.value.real() ==
              doctest::Approx(full.value.real()).epsilon(n == 1 ? 1e-8 : 1e-12));
        // mean of a constant over any cap is the constant
        const TubeSpec small(zeta, 0.3);
        const auto mean = integrate_cap(
            [](std::span<const cxd>) { return cxd{3.5, 0.0}; }, small, rule, true);
        CHECK(mean.value.real() == doctest::Approx(3.5).epsilon(1e-12));
    }
}

TEST_CASE("cap measure scales like r^n") {
    for (int n : {1, 2}) {
        const QuadRule rule = sphere_rule(n, n == 1 ? 4 : 4, 13);
        CVec zeta(n);
        zeta[0] = cxd{0.0, 1.0};
        double lo = 1e300, hi = 0.0;
        for (double r : {0.07, 0.1, 0.2, 0.4, 0.7, 1.0}) {
            const CapMoments mom = cap_moments(
                [](std::span<const cxd>) { return cxd{1.0, 0.0}; }, TubeSpec(zeta, r),
                rule);
            const double ratio = mom.m0 / pow_i(r, n);
            lo = std::min(lo, ratio);
            hi = std::max(hi, ratio);
        }
        CHECK(lo > 0.0);
        CHECK(hi / lo < 3.0);
    }
}

TEST_CASE("under-resolved caps and tubes raise errors") {
    const QuadRule rule = sphere_rule(2, 1, 17);
    CVec zeta(2);
    zeta[0] = cxd{1.0, 0.0};
    CHECK_THROWS_WITH_AS(
        (void)cap_moments([](std::span<const cxd>) { return cxd{1.0, 0.0}; },
                          TubeSpec(zeta, 0.01), rule),
        doctest::Contains("cap under-resolved"), std::runtime_error);
    const QuadRule ball = ball_rule(2, 1, 17);
    CHECK_THROWS_WITH_AS(
        (void)integrate_tube([](std::span<const cxd>) { return cxd{1.0, 0.0}; },
                             TubeSpec(zeta, 0.02), ball),
        doctest::Contains("tube under-resolved"), std::runtime_error);
}

TEST_CASE("rotation invariance of the sphere rule") {
    // Random unitary built from a complex Givens rotation and phases.
    const QuadRule rule = sphere_rule(2, 3, 19);
    Xoshiro256ss rng(23);
    const double th = rng.uniform() * 1.3;
    const cxd ph1 = std::polar(1.0, rng.uniform() * 6.28);
    const cxd ph2 = std::polar(1.0, rng.uniform() * 6.28);
    auto g = [](std::span<const cxd> z) {
        return cxd{std::norm(z[0]) * std::norm(z[0]), 0.0};
    };
    auto g_rot = [&](std::span<const cxd> z) {
        const cxd u0 = ph1 * (std::cos(th) * z[0] - std::sin(th) * z[1]);
        const cxd u1 = ph2 * (std::sin(th) * z[0] + std::cos(th) * z[1]);
        const cxd uz[2] = {u0, u1};
        return cxd{std::norm(uz[0]) * std::norm(uz[0]), 0.0};
    };
    const auto a = integrate(g, rule);
    const auto b = integrate(g_rot, rule);
    CHECK(std::abs(a.value.real() - b.value.real()) <=
          3.0 * (a.err_est + b.err_est));
}

TEST_CASE("identical seeds give bit-identical rules") {
    for (auto kind : {RuleKind::monte_carlo, RuleKind::quasi_mc}) {
        const QuadRule a = sphere_rule(2, 1, 777, kind);
        const QuadRule b = sphere_rule(2, 1, 777, kind);
        REQUIRE(a.count() == b.count());
        bool same = true;
        for (std::size_t i = 0; i < a.nodes.size(); ++i)
            same = same && a.nodes[i] == b.nodes[i];
        CHECK(same);
        const QuadRule c = sphere_rule(2, 1, 778, kind);
        bool differ = false;
        for (std::size_t i = 0; i < a.nodes.size(); ++i)
            differ = differ || a.nodes[i] != c.nodes[i];
        CHECK(differ);
    }
}

TEST_CASE("refinement consistency of smooth integrands") {
    // Doubling the nodes moves the result by about the reported error.
    auto g = [](std::span<const cxd> z) {
        return cxd{std::exp(z[0].real()) * std::norm(z[1]), 0.0};
    };
    const QuadRule lo = sphere_rule(2, 2, 31);
    const QuadRule hi = sphere_rule(2, 3, 31);
    const auto a = integrate(g, lo);
    const auto b = integrate(g, hi);
    CHECK(std::abs(a.value.real() - b.value.real()) <= 4.0 * (a.err_est + b.err_est));
}

TEST_CASE("rule cache round-trips bit-exactly") {
    const QuadRule rule = ball_rule(2, 1, 4242);
    const auto file = std::filesystem::temp_directory_path() /
                      rule_cache_name(rule.domain, rule.n, rule.level, rule.kind,
                                      rule.seed);
    save_rule(rule, file);
    const QuadRule back = load_rule(file);
    std::filesystem::remove(file);
    REQUIRE(back.count() == rule.count());
    CHECK(back.n == rule.n);
    CHECK(back.seed == rule.seed);
    CHECK(static_cast<int>(back.kind) == static_cast<int>(rule.kind));
    bool same = true;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        same = same && rule.nodes[i] == back.nodes[i];
    for (std::size_t i = 0; i < rule.weights.size(); ++i)
        same = same && rule.weights[i] == back.weights[i];
    CHECK(same);
}

TEST_CASE("non-finite integrand values are reported") {
    const QuadRule b1 = ball_rule(1, 1, 5);
    CHECK_THROWS_WITH_AS(
        (void)integrate(
            [](std::span<const cxd> z) {
                return cxd{1.0 / (norm_sq(z) - norm_sq(z)), 0.0};
            },
            b1),
        doctest::Contains("non-finite"), std::runtime_error);
}
