#include "holoball/integrate.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "holoball/quad1d.hpp"
#include "holoball/reduce.hpp"

namespace holoball {

namespace {

double node_weight_factor(std::span<const cxd> z, double exponent) {
    if (exponent == 0.0) return 1.0;
    return std::pow(1.0 - norm_sq(z), exponent);
}

} // namespace

IntegralResult integrate(const Integrand& g, const QuadRule& rule,
                         const Weight& weight) {
    const double e = weight.exponent(rule.n) - rule.radial_power;
    const std::size_t N = rule.count();
    std::vector<cxd> terms(N);
    parallel_for(N, [&](std::size_t i) {
        const auto z = rule.node(i);
        terms[i] = rule.weights[i] * g(z) * node_weight_factor(z, e);
    });
    for (std::size_t i = 0; i < N; ++i)
        if (!std::isfinite(terms[i].real()) || !std::isfinite(terms[i].imag()))
            throw std::runtime_error("integrate: non-finite integrand value at a node");

    IntegralResult out;
    out.nodes_used = N;
    out.value = block_sum<cxd>(N, [&](std::size_t i) { return terms[i]; });

    if (rule.kind == RuleKind::tensor) {
        out.err_est = 1e-14 * (1.0 + std::abs(out.value));
        return out;
    }
    // 16-batch standard error of the batch means (MC) / shifts (QMC).
    const std::size_t per = N / kErrorBatches;
    if (per == 0) {
        out.err_est = std::abs(out.value);
        return out;
    }
    cxd bm[kErrorBatches];
    for (int b = 0; b < kErrorBatches; ++b) {
        cxd s = block_sum<cxd>(per, [&](std::size_t i) { return terms[b * per + i]; });
        bm[b] = s * static_cast<double>(kErrorBatches); // batch estimate of total
    }
    cxd mean{0.0, 0.0};
    for (const auto& x : bm) mean += x;
    mean /= static_cast<double>(kErrorBatches);
    double var = 0.0;
    for (const auto& x : bm) var += std::norm(x - mean);
    var /= (kErrorBatches - 1.0);
    out.err_est = std::sqrt(var / kErrorBatches);
    return out;
}

bool refinement_divergence_probe(const Integrand& g, const QuadRule& coarse,
                                 const QuadRule& fine, const Weight& weight) {
    const double lo = std::abs(integrate(g, coarse, weight).value);
    const double hi = std::abs(integrate(g, fine, weight).value);
    return hi > 1.25 * lo + 1e-12;
}

namespace {

// Exact arc parameterization of the circle cap {|1 - zeta conj(xi)| < r}:
// half-angle h = 2 asin(r/2), sigma(cap) = h/pi.
CapMoments cap_moments_arc(const Integrand& f, const TubeSpec& tube) {
    const double r = std::min(tube.radius, 2.0);
    const double h = 2.0 * std::asin(std::min(r / 2.0, 1.0));
    const double phi = std::arg(tube.center[0]);
    CapMoments mom;
    mom.m0 = h / std::numbers::pi;
    if (h <= 0.0) return mom;
    std::size_t evals = 0;
    auto fval = [&](double th) {
        const cxd zeta{std::cos(th), std::sin(th)};
        ++evals;
        return f(std::span<const cxd>(&zeta, 1));
    };
    const double tol = 1e-12 * std::max(1.0, h);
    const cxd i1 = adaptive_gk15<cxd>([&](double th) { return fval(th); }, phi - h,
                                      phi + h, tol);
    const double inv2pi = 1.0 / (2.0 * std::numbers::pi);
    mom.m1 = i1 * inv2pi;
    // Second pass against the mean; exact zero for constants.
    const cxd mean = i1 / (2.0 * h);
    const double i2c = adaptive_gk15<double>(
        [&](double th) { return std::norm(fval(th) - mean); }, phi - h, phi + h, tol);
    mom.osc_direct = std::max(i2c * inv2pi, 0.0);
    mom.m2 = mom.osc_direct + std::norm(mom.m1) / mom.m0;
    mom.n_used = evals;
    return mom;
}

CapMoments cap_moments_filtered(const Integrand& f, const TubeSpec& tube,
                                const QuadRule& rule, std::size_t node_floor) {
    const std::size_t N = rule.count();
    const cxd* c = tube.center.v.data();
    const std::size_t n = static_cast<std::size_t>(rule.n);
    struct Part {
        double m0, m2;
        cxd m1;
        std::size_t used;
    };
    const std::size_t nblocks = (N + kReduceBlock - 1) / kReduceBlock;
    std::vector<Part> parts(nblocks);
    parallel_for(nblocks, [&](std::size_t b) {
        const std::size_t lo = b * kReduceBlock, hi = std::min(lo + kReduceBlock, N);
        Kahan<double> m0, m2;
        Kahan<cxd> m1;
        std::size_t used = 0;
        for (std::size_t i = lo; i < hi; ++i) {
            const cxd* z = rule.nodes.data() + i * n;
            if (std::abs(1.0 - herm_inner_raw(z, c, n)) >= tube.radius) continue;
            const double w = rule.weights[i];
            const cxd v = f(std::span<const cxd>(z, n));
            m0.add(w);
            m1.add(w * v);
            m2.add(w * std::norm(v));
            ++used;
        }
        parts[b] = {m0.sum, m2.sum, m1.sum, used};
    });
    CapMoments mom;
    Kahan<double> m0, m2;
    Kahan<cxd> m1;
    for (const auto& p : parts) {
        m0.add(p.m0);
        m1.add(p.m1);
        m2.add(p.m2);
        mom.n_used += p.used;
    }
    mom.m0 = m0.sum;
    mom.m1 = m1.sum;
    mom.m2 = m2.sum;
    if (mom.n_used < node_floor)
        throw std::runtime_error("cap under-resolved: only " +
                                 std::to_string(mom.n_used) +
                                 " nodes in the cap (floor " +
                                 std::to_string(node_floor) + ")");
    return mom;
}

} // namespace

CapMoments cap_moments(const Integrand& f, const TubeSpec& tube, const QuadRule& rule,
                       std::size_t node_floor) {
    if (rule.domain != Domain::sphere)
        throw std::invalid_argument("cap_moments: sphere rule required");
    if (rule.n == 1) return cap_moments_arc(f, tube);
    return cap_moments_filtered(f, tube, rule, node_floor);
}

IntegralResult integrate_cap(const Integrand& g, const TubeSpec& tube,
                             const QuadRule& rule, bool mean_requested,
                             std::size_t node_floor) {
    const CapMoments mom = cap_moments(g, tube, rule, node_floor);
    IntegralResult out;
    out.nodes_used = mom.n_used;
    out.value = mean_requested ? mom.mean() : mom.m1;
    out.err_est = rule.n == 1 ? 1e-12
                              : std::abs(out.value) /
                                    std::sqrt(static_cast<double>(
                                        std::max<std::size_t>(mom.n_used, 1)));
    return out;
}

IntegralResult integrate_tube(const Integrand& g, const TubeSpec& tube,
                              const QuadRule& rule, const Weight& weight,
                              bool mean_requested, std::size_t node_floor) {
    if (rule.domain != Domain::ball)
        throw std::invalid_argument("integrate_tube: ball rule required");
    const double e = weight.exponent(rule.n) - rule.radial_power;
    const std::size_t N = rule.count();
    const cxd* c = tube.center.v.data();
    const std::size_t n = static_cast<std::size_t>(rule.n);
    struct Part {
        cxd sum;
        double mass;
        std::size_t used;
    };
    const std::size_t nblocks = (N + kReduceBlock - 1) / kReduceBlock;
    std::vector<Part> parts(nblocks);
    parallel_for(nblocks, [&](std::size_t b) {
        const std::size_t lo = b * kReduceBlock, hi = std::min(lo + kReduceBlock, N);
        Kahan<cxd> sum;
        Kahan<double> mass;
        std::size_t used = 0;
        for (std::size_t i = lo; i < hi; ++i) {
            const cxd* z = rule.nodes.data() + i * n;
            if (std::abs(1.0 - herm_inner_raw(z, c, n)) >= tube.radius) continue;
            const std::span<const cxd> zs(z, n);
            const double w = rule.weights[i] * node_weight_factor(zs, e);
            sum.add(w * g(zs));
            mass.add(w);
            ++used;
        }
        parts[b] = {sum.sum, mass.sum, used};
    });
    Kahan<cxd> sum;
    Kahan<double> mass;
    std::size_t used = 0;
    for (const auto& p : parts) {
        sum.add(p.sum);
        mass.add(p.mass);
        used += p.used;
    }
    if (used < node_floor)
        throw std::runtime_error("tube under-resolved: only " + std::to_string(used) +
                                 " nodes in the tube (floor " +
                                 std::to_string(node_floor) + ")");
    IntegralResult out;
    out.nodes_used = used;
    out.value = mean_requested && mass.sum > 0.0 ? sum.sum / mass.sum : sum.sum;
    out.err_est =
        std::abs(out.value) / std::sqrt(static_cast<double>(std::max<std::size_t>(used, 1)));
    return out;
}

bool g_parallel_enabled = true;

bool parallel_enabled() { return g_parallel_enabled; }
void set_parallel_enabled(bool on) { g_parallel_enabled = on; }

} // namespace holoball
