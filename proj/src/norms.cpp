#include "holoball/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "holoball/mobius.hpp"
#include "holoball/quad1d.hpp"
#include "holoball/reduce.hpp"

namespace holoball {

SpaceParams SpaceParams::make(int n, double s) {
    if (n < 1) throw std::invalid_argument("SpaceParams: n >= 1");
    if (!(s > -1.0 && s <= 0.5 * n))
        throw std::domain_error("SpaceParams: s must lie in (-1, n/2]");
    return {n, s};
}

void SpaceParams::require_transform_range() const {
    if (!(s > -0.5 && s <= 0.5 * n))
        throw std::domain_error("hypothesis violated: s must lie in (-1/2, n/2]");
}

void SpaceParams::require_gradient_range() const {
    if (!(s > -0.5 && s < 0.5 * n))
        throw std::domain_error("hypothesis violated: s must lie in (-1/2, n/2)");
}

Regime regime(const SpaceParams& params) {
    if (params.s < 0.0) return Regime::lipschitz;
    if (params.s == 0.0) return Regime::bmoa;
    if (params.s < 0.5 * params.n) return Regime::morrey;
    return Regime::hardy;
}

std::string regime_label(Regime r) {
    switch (r) {
        case Regime::lipschitz: return "Lipschitz";
        case Regime::bmoa: return "BMOA";
        case Regime::morrey: return "Morrey";
        case Regime::hardy: return "Hardy";
    }
    return "?";
}

QpRegime qp_regime(int n, double p) {
    if (!(p > 0.0)) throw std::domain_error("qp_regime: p > 0 required");
    const double lo = (n - 1.0) / n;
    const double hi = n > 1 ? n / (n - 1.0) : std::numeric_limits<double>::infinity();
    const double tol = 1e-12;
    if (p <= lo + tol) return QpRegime::constants;
    if (p < 1.0 - tol) return QpRegime::fractional_scale;
    if (p <= 1.0 + tol) return QpRegime::bmoa;
    if (p < hi - tol) return QpRegime::bloch;
    return QpRegime::constants;
}

std::string qp_regime_label(QpRegime r) {
    switch (r) {
        case QpRegime::constants: return "constants";
        case QpRegime::fractional_scale: return "Qp-fractional";
        case QpRegime::bmoa: return "BMOA";
        case QpRegime::bloch: return "Bloch";
    }
    return "?";
}

double hardy2_norm(const HoloFun& f, const QuadRule& sphere) {
    if (sphere.domain != Domain::sphere)
        throw std::invalid_argument("hardy2_norm: sphere rule required");
    const double v = block_sum<double>(sphere.count(), [&](std::size_t i) {
        return sphere.weights[i] * std::norm(f.eval(sphere.node(i)));
    });
    return std::sqrt(std::max(v, 0.0));
}

std::vector<double> hardy2_radial_scan(const HoloFun& f, const QuadRule& sphere,
                                       std::span<const double> radii) {
    std::vector<double> out;
    out.reserve(radii.size());
    const std::size_t n = static_cast<std::size_t>(sphere.n);
    for (double r : radii) {
        const double v = block_sum<double>(sphere.count(), [&](std::size_t i) {
            cxd w[8];
            const auto zeta = sphere.node(i);
            for (std::size_t k = 0; k < n; ++k) w[k] = r * zeta[k];
            return sphere.weights[i] * std::norm(f.eval(std::span<const cxd>(w, n)));
        });
        out.push_back(std::sqrt(std::max(v, 0.0)));
    }
    return out;
}

CapProfile cap_profile(const HoloFun& f, const SupGrid& grid, const QuadRule& sphere,
                       std::size_t node_floor) {
    if (sphere.n != grid.n)
        throw std::invalid_argument("cap_profile: rule/grid dimension mismatch");
    CapProfile prof;
    prof.n_centers = grid.center_count();
    prof.radii = grid.radii;
    const std::size_t R = prof.radii.size();
    prof.osc.assign(prof.n_centers * R, 0.0);
    prof.mass.assign(prof.n_centers * R, 0.0);
    prof.nodes_used = sphere.count();

    if (grid.n == 1) {
        // Exact arc parameterization per cap.
        for (std::size_t c = 0; c < prof.n_centers; ++c) {
            const CVec zeta(std::vector<cxd>(grid.center(c).begin(),
                                             grid.center(c).end()));
            for (std::size_t j = 0; j < R; ++j) {
                const TubeSpec tube(zeta, prof.radii[j]);
                const CapMoments mom =
                    cap_moments([&](std::span<const cxd> z) { return f.eval(z); },
                                tube, sphere, node_floor);
                prof.osc[c * R + j] = mom.oscillation();
                prof.mass[c * R + j] = mom.m0;
            }
        }
        return prof;
    }

    // n >= 2: evaluate f once at every node, then bucket nodes per center by
    // the smallest radius containing them and take prefix sums.
    const std::size_t N = sphere.count();
    const std::size_t n = static_cast<std::size_t>(sphere.n);
    std::vector<cxd> fv(N);
    parallel_for(N, [&](std::size_t i) { fv[i] = f.eval(sphere.node(i)); });

    std::size_t min_used = N;
    std::vector<std::size_t> used_per_cap(prof.n_centers * R, 0);
    parallel_for(prof.n_centers, [&](std::size_t c) {
        const cxd* zeta = grid.centers.data() + c * n;
        std::vector<Kahan<double>> m0(R), m2(R);
        std::vector<Kahan<cxd>> m1(R);
        std::vector<std::size_t> cnt(R, 0);
        for (std::size_t i = 0; i < N; ++i) {
            const double d =
                std::abs(1.0 - herm_inner_raw(sphere.nodes.data() + i * n, zeta, n));
            const std::size_t j = static_cast<std::size_t>(
                std::upper_bound(prof.radii.begin(), prof.radii.end(), d) -
                prof.radii.begin());
            if (j >= R) continue; // outside the largest cap
            const double w = sphere.weights[i];
            m0[j].add(w);
            m1[j].add(w * fv[i]);
            m2[j].add(w * std::norm(fv[i]));
            ++cnt[j];
        }
        Kahan<double> c0, c2;
        Kahan<cxd> c1;
        std::size_t used = 0;
        for (std::size_t j = 0; j < R; ++j) {
            c0.add(m0[j].sum);
            c1.add(m1[j].sum);
            c2.add(m2[j].sum);
            used += cnt[j];
            used_per_cap[c * R + j] = used;
            prof.mass[c * R + j] = c0.sum;
            const double osc =
                c0.sum > 0.0 ? c2.sum - std::norm(c1.sum) / c0.sum : 0.0;
            prof.osc[c * R + j] = osc < 0.0 ? 0.0 : osc;
        }
    });
    for (std::size_t idx = 0; idx < used_per_cap.size(); ++idx)
        min_used = std::min(min_used, used_per_cap[idx]);
    if (min_used < node_floor)
        throw std::runtime_error("cap under-resolved: only " +
                                 std::to_string(min_used) +
                                 " nodes in the smallest cap (floor " +
                                 std::to_string(node_floor) + ")");
    return prof;
}

namespace {

// Bucketed d < radii[j]: a node with distance d belongs to every cap with
// r > d, i.e. the prefix over buckets starting at upper_bound(d). Note
// upper_bound gives the first radius strictly greater than d, matching the
// open condition |1 - <z,zeta>| < r.

ASampleProfile make_a_profile(std::vector<cxd> a_flat, int n) {
    ASampleProfile prof;
    prof.a = std::move(a_flat);
    prof.n = n;
    prof.integral.assign(prof.a.size() / n, 0.0);
    return prof;
}

} // namespace

ASampleProfile mobius_profile(const HoloFun& f, std::vector<cxd> a_flat, int n,
                              const QuadRule& sphere) {
    if (sphere.domain != Domain::sphere || sphere.n != n)
        throw std::invalid_argument("mobius_profile: matching sphere rule required");
    ASampleProfile prof = make_a_profile(std::move(a_flat), n);
    prof.nodes_used = sphere.count();
    const std::size_t nn = static_cast<std::size_t>(n);
    const std::size_t A = prof.integral.size();
    // Parallel over samples; the nested node reduction then runs serially
    // (fixed blocks, so the values match the serial path bit for bit).
    parallel_for(A, [&](std::size_t ai) {
        const cxd* a = prof.a.data() + ai * nn;
        const double asq = norm_sq(std::span<const cxd>(a, nn));
        const cxd fa = f.eval(std::span<const cxd>(a, nn));
        prof.integral[ai] = block_sum<double>(sphere.count(), [&](std::size_t i) {
            cxd img[8];
            mobius_raw(a, asq, sphere.nodes.data() + i * nn, nn, img);
            const cxd v = f.eval(std::span<const cxd>(img, nn)) - fa;
            return sphere.weights[i] * std::norm(v);
        });
    });
    return prof;
}

ASampleProfile green_profile(const HoloFun& f, std::vector<cxd> a_flat, int n,
                             const QuadRule& ball, double sing_cutoff) {
    if (ball.domain != Domain::ball || ball.n != n)
        throw std::invalid_argument("green_profile: matching ball rule required");
    ASampleProfile prof = make_a_profile(std::move(a_flat), n);
    prof.nodes_used = ball.count();
    const std::size_t nn = static_cast<std::size_t>(n);
    const std::size_t A = prof.integral.size();
    const double rho0 = std::tanh(sing_cutoff);

    // Integrand after z = phi_a(w):  |invgrad f(phi_a(w))|^2 G(|w|) dlambda(w).
    // Cache G(|w|) (1-|w|^2)^{-(n+1)} per node; it does not depend on a.
    const std::size_t N = ball.count();
    std::vector<double> gw(N);
    parallel_for(N, [&](std::size_t i) {
        const double rho = std::sqrt(norm_sq(ball.node(i)));
        gw[i] = rho < rho0 ? 0.0
                           : green_radial(rho, n) /
                                 pow_i(1.0 - rho * rho, n + 1) * ball.weights[i];
    });
    // Remainder of the excluded Bergman ball around the singularity:
    // max|invgrad|^2 is estimated at the center image; the radial factor is
    // integrated exactly in 1-D.
    const double t0 = 2.0 * n *
                      adaptive_gk15<double>(
                          [&](double rho) {
                              return green_radial(std::max(rho, 1e-300), n) /
                                     pow_i(1.0 - rho * rho, n + 1) *
                                     std::pow(rho, 2.0 * n - 1.0);
                          },
                          1e-12, rho0, 1e-14);

    std::vector<double> excluded(A);
    parallel_for(A, [&](std::size_t ai) {
        const cxd* a = prof.a.data() + ai * nn;
        const double asq = norm_sq(std::span<const cxd>(a, nn));
        prof.integral[ai] = block_sum<double>(N, [&](std::size_t i) {
            if (gw[i] == 0.0) return 0.0;
            cxd img[8];
            mobius_raw(a, asq, ball.nodes.data() + i * nn, nn, img);
            return gw[i] * f.inv_grad_sq(std::span<const cxd>(img, nn));
        });
        excluded[ai] = 4.0 * f.inv_grad_sq(std::span<const cxd>(a, nn)) * t0;
    });
    for (double e : excluded) prof.excluded_bound = std::max(prof.excluded_bound, e);
    return prof;
}

namespace {

NormReport sup_over_a(const ASampleProfile& prof, double s_exponent) {
    NormReport rep;
    rep.nodes_used = prof.nodes_used;
    const std::size_t A = prof.integral.size();
    const auto [best, arg] = block_max(A, [&](std::size_t i) {
        const double asq =
            norm_sq(std::span<const cxd>(prof.a.data() + i * prof.n, prof.n));
        return std::pow(1.0 - asq, s_exponent) * std::sqrt(prof.integral[i]);
    });
    rep.seminorm = std::max(best, 0.0);
    rep.value = rep.seminorm;
    rep.argmax_center = arg;
    rep.argmax_r =
        1.0 - std::sqrt(norm_sq(std::span<const cxd>(prof.a.data() + arg * prof.n,
                                                     prof.n)));
    return rep;
}

} // namespace

NormReport osc_norm_from_profile(const CapProfile& prof, double hardy,
                                 const SpaceParams& params) {
    NormReport rep;
    rep.hardy_part = hardy;
    rep.nodes_used = prof.nodes_used;
    const std::size_t R = prof.radii.size();
    const auto [best, arg] =
        block_max(prof.n_centers * R, [&](std::size_t idx) {
            const double r = prof.radii[idx % R];
            return std::pow(r, 2.0 * params.s - params.n) * prof.osc[idx];
        });
    rep.seminorm = std::sqrt(std::max(best, 0.0));
    rep.argmax_center = arg / R;
    rep.argmax_r = prof.radii[arg % R];
    rep.value = hardy + rep.seminorm;
    return rep;
}

NormReport mobius_norm_from_profile(const ASampleProfile& prof,
                                    const SpaceParams& params) {
    return sup_over_a(prof, params.s);
}

NormReport green_norm_from_profile(const ASampleProfile& prof,
                                   const SpaceParams& params) {
    return sup_over_a(prof, params.s);
}

NormReport campanato_norm_osc(const HoloFun& f, const SpaceParams& params,
                              const SupGrid& grid, const QuadRule& sphere) {
    if (!(params.s > -1.0 && params.s <= 0.5 * params.n))
        throw std::domain_error("campanato_norm_osc: s must lie in (-1, n/2]");
    const CapProfile prof = cap_profile(f, grid, sphere);
    return osc_norm_from_profile(prof, hardy2_norm(f, sphere), params);
}

NormReport campanato_norm_mobius(const HoloFun& f, const SpaceParams& params,
                                 const SupGrid& grid, const QuadRule& sphere) {
    params.require_transform_range();
    const ASampleProfile prof = mobius_profile(f, grid.a_samples(), params.n, sphere);
    return mobius_norm_from_profile(prof, params);
}

NormReport campanato_norm_green(const HoloFun& f, const SpaceParams& params,
                                const SupGrid& grid, const QuadRule& ball) {
    params.require_transform_range();
    const ASampleProfile prof = green_profile(f, grid.a_samples(), params.n, ball);
    return green_norm_from_profile(prof, params);
}

double qp_integral(const HoloFun& f, double p, std::span<const cxd> omega,
                   const QuadRule& ball, double sing_cutoff,
                   double* excluded_bound) {
    if (!(p > 0.0)) throw std::domain_error("qp_integral: p > 0 required");
    const int n = ball.n;
    const std::size_t nn = static_cast<std::size_t>(n);
    const double rho0 = std::tanh(sing_cutoff);
    const double osq = norm_sq(omega);
    const double v = block_sum<double>(ball.count(), [&](std::size_t i) {
        const auto w = ball.node(i);
        const double rho = std::sqrt(norm_sq(w));
        if (rho < rho0) return 0.0;
        cxd img[8];
        mobius_raw(omega.data(), osq, w.data(), nn, img);
        const double jac =
            pow_i((1.0 - osq) / std::norm(1.0 - herm_inner_raw(w.data(), omega.data(), nn)),
                  n + 1);
        return ball.weights[i] * f.grad_norm_sq(std::span<const cxd>(img, nn)) *
               std::pow(green_radial(rho, n), p) * jac;
    });
    if (excluded_bound) {
        const double tp = 2.0 * n *
                          adaptive_gk15<double>(
                              [&](double rho) {
                                  return std::pow(green_radial(std::max(rho, 1e-300), n), p) *
                                         std::pow(rho, 2.0 * n - 1.0);
                              },
                              1e-12, rho0, 1e-14);
        const double jac0 = pow_i((1.0 + std::sqrt(osq)) / (1.0 - std::sqrt(osq)), n + 1);
        *excluded_bound = 4.0 * f.grad_norm_sq(omega) * jac0 * tp;
    }
    return v;
}

NormReport qp_norm(const HoloFun& f, double p, std::span<const cxd> omegas_flat,
                   int n, const QuadRule& ball, double sing_cutoff) {
    const std::size_t A = omegas_flat.size() / n;
    NormReport rep;
    rep.nodes_used = ball.count();
    std::vector<double> vals(A);
    for (std::size_t i = 0; i < A; ++i)
        vals[i] = qp_integral(f, p, omegas_flat.subspan(i * n, n), ball, sing_cutoff);
    const auto [best, arg] =
        block_max(A, [&](std::size_t i) { return std::sqrt(std::max(vals[i], 0.0)); });
    rep.value = rep.seminorm = std::max(best, 0.0);
    rep.argmax_center = arg;
    return rep;
}

double bloch_alpha_norm(const HoloFun& f, double alpha,
                        std::span<const cxd> z_samples_flat) {
    const int n = f.dim();
    const std::size_t A = z_samples_flat.size() / n;
    const auto [best, arg] = block_max(A, [&](std::size_t i) {
        const auto z = z_samples_flat.subspan(i * n, n);
        const double zsq = norm_sq(z);
        return std::pow(std::max(1.0 - zsq, 0.0), alpha) *
               std::sqrt(f.grad_norm_sq(z));
    });
    (void)arg;
    return std::max(best, 0.0);
}

double hinf_norm(const HoloFun& f, std::span<const cxd> z_samples_flat) {
    const int n = f.dim();
    const std::size_t A = z_samples_flat.size() / n;
    const auto [best, arg] = block_max(
        A, [&](std::size_t i) { return std::abs(f.eval(z_samples_flat.subspan(i * n, n))); });
    (void)arg;
    return std::max(best, 0.0);
}

double growth_ratio(const HoloFun& f, const SpaceParams& params,
                    std::span<const cxd> z_samples_flat, double osc_norm) {
    params.require_transform_range();
    if (!(osc_norm > 1e-14))
        throw std::domain_error(
            "growth_ratio: undefined ratio for a (near-)constant function");
    const int n = f.dim();
    const std::size_t A = z_samples_flat.size() / n;
    const auto [best, arg] = block_max(A, [&](std::size_t i) {
        const auto z = z_samples_flat.subspan(i * n, n);
        const double zsq = norm_sq(z);
        if (!(zsq < 1.0)) return 0.0;
        return std::pow(1.0 - zsq, 1.0 + params.s) * std::sqrt(f.grad_norm_sq(z));
    });
    (void)arg;
    return std::max(best, 0.0) / osc_norm;
}

} // namespace holoball
