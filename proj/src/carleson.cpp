#include "holoball/carleson.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "holoball/reduce.hpp"

namespace holoball {

MeasureSpec MeasureSpec::discrete(int n, std::vector<double> masses,
                                  std::vector<cxd> points_flat) {
    if (points_flat.size() != masses.size() * static_cast<std::size_t>(n))
        throw std::invalid_argument("MeasureSpec: mass/point count mismatch");
    MeasureSpec mu;
    mu.n = n;
    mu.masses = std::move(masses);
    mu.points = std::move(points_flat);
    for (double w : mu.masses)
        if (!(w >= 0.0)) throw std::invalid_argument("MeasureSpec: masses must be >= 0");
    for (std::size_t k = 0; k < mu.atom_count(); ++k)
        require_interior(mu.atom(k), "measure atom");
    return mu;
}

MeasureSpec MeasureSpec::from_density(
    int n, std::function<double(std::span<const cxd>)> g) {
    MeasureSpec mu;
    mu.n = n;
    mu.density = std::move(g);
    return mu;
}

double MeasureSpec::total_mass(const QuadRule* rule) const {
    if (is_discrete()) {
        Kahan<double> s;
        for (double w : masses) s.add(w);
        return s.sum;
    }
    if (!rule) throw std::invalid_argument("total_mass: density needs a ball rule");
    const auto r = integrate(
        [&](std::span<const cxd> z) { return cxd{density(z), 0.0}; }, *rule);
    return r.value.real();
}

void save_discrete(const MeasureSpec& mu, const std::filesystem::path& file) {
    if (!mu.is_discrete())
        throw std::invalid_argument("save_discrete: discrete measure required");
    std::ofstream os(file, std::ios::trunc);
    if (!os) throw std::runtime_error("save_discrete: cannot open file");
    char buf[40];
    auto put = [&](double x) {
        std::snprintf(buf, sizeof(buf), "%.17g", x);
        os << buf;
    };
    for (std::size_t k = 0; k < mu.atom_count(); ++k) {
        put(mu.masses[k]);
        const auto a = mu.atom(k);
        for (const auto& c : a) {
            os << ' ';
            put(c.real());
            os << ' ';
            put(c.imag());
        }
        os << '\n';
    }
}

MeasureSpec load_discrete(int n, const std::filesystem::path& file) {
    std::ifstream is(file);
    if (!is) throw std::runtime_error("load_discrete: cannot open file");
    std::vector<double> masses;
    std::vector<cxd> points;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        double w;
        if (!(ls >> w)) throw std::runtime_error("load_discrete: bad mass");
        masses.push_back(w);
        for (int j = 0; j < n; ++j) {
            double re, im;
            if (!(ls >> re >> im)) throw std::runtime_error("load_discrete: bad point");
            points.emplace_back(re, im);
        }
    }
    return MeasureSpec::discrete(n, std::move(masses), std::move(points));
}

namespace {

// Denominators are increasing in r on (0,2], so mass/denom is decreasing
// between mass jumps and the per-center supremum over r sits at the jump
// radii (approached from above) plus the r_max endpoint.
double power_denom(double r, double np) { return std::pow(r, np); }
double log_denom(double r, int n) {
    const double lg = std::log(2.0 / r);
    return pow_i(r, n) / (lg * lg);
}

TubeSup tube_sup_discrete(std::span<const double> masses,
                          std::span<const cxd> points, int n, const SupGrid& grid,
                          const std::function<double(double)>& denom) {
    const double r_max = grid.radii.back();
    const std::size_t K = masses.size();
    const std::size_t C = grid.center_count();
    std::vector<TubeSup> per_center(C);
    parallel_for(C, [&](std::size_t c) {
        const cxd* zeta = grid.centers.data() + c * static_cast<std::size_t>(n);
        std::vector<std::pair<double, double>> jumps(K); // (distance, mass)
        for (std::size_t k = 0; k < K; ++k)
            jumps[k] = {std::abs(1.0 - herm_inner_raw(
                            points.data() + k * static_cast<std::size_t>(n), zeta,
                            static_cast<std::size_t>(n))),
                        masses[k]};
        std::sort(jumps.begin(), jumps.end());
        TubeSup best;
        Kahan<double> cum;
        double mass_below_rmax = 0.0;
        for (std::size_t i = 0; i < K && jumps[i].first < r_max; ++i) {
            cum.add(jumps[i].second);
            mass_below_rmax = cum.sum;
            // fold ties at the same distance before scoring
            if (i + 1 < K && jumps[i + 1].first == jumps[i].first) continue;
            const double v = cum.sum / denom(jumps[i].first);
            if (v > best.constant * best.constant) {
                best.constant = std::sqrt(v);
                best.argmax_r = jumps[i].first;
            }
        }
        const double v_end = mass_below_rmax / denom(r_max);
        if (v_end > best.constant * best.constant) {
            best.constant = std::sqrt(v_end);
            best.argmax_r = r_max;
        }
        best.argmax_center = c;
        per_center[c] = best;
    });
    TubeSup best;
    for (const auto& cand : per_center)
        if (cand.constant > best.constant) best = cand;
    return best;
}

TubeSup tube_sup_density_values(std::vector<double> gv, int n, const SupGrid& grid,
                                const QuadRule& ball,
                                const std::function<double(double)>& denom,
                                std::size_t node_floor) {
    const std::size_t N = ball.count();
    const std::size_t nn = static_cast<std::size_t>(n);
    for (double v : gv)
        if (!std::isfinite(v) || v < 0.0)
            throw std::runtime_error("cm_constant: density must be finite and >= 0");

    const std::size_t C = grid.center_count();
    const std::size_t R = grid.radii.size();
    std::vector<TubeSup> per_center(C);
    std::vector<std::uint8_t> resolved(C, 0);
    parallel_for(C, [&](std::size_t c) {
        const cxd* zeta = grid.centers.data() + c * nn;
        std::vector<Kahan<double>> bucket(R);
        std::vector<std::size_t> cnt(R, 0);
        for (std::size_t i = 0; i < N; ++i) {
            const double d =
                std::abs(1.0 - herm_inner_raw(ball.nodes.data() + i * nn, zeta, nn));
            const std::size_t j = static_cast<std::size_t>(
                std::upper_bound(grid.radii.begin(), grid.radii.end(), d) -
                grid.radii.begin());
            if (j >= R) continue;
            bucket[j].add(gv[i]);
            ++cnt[j];
        }
        TubeSup best;
        Kahan<double> mass;
        std::size_t used = 0;
        for (std::size_t j = 0; j < R; ++j) {
            mass.add(bucket[j].sum);
            used += cnt[j];
            if (used < node_floor) continue; // tube under-resolved; skip radius
            resolved[c] = 1;
            const double v = mass.sum / denom(grid.radii[j]);
            if (v > best.constant * best.constant) {
                best.constant = std::sqrt(v);
                best.argmax_r = grid.radii[j];
            }
        }
        best.argmax_center = c;
        per_center[c] = best;
    });
    TubeSup best;
    bool any = false;
    for (std::size_t c = 0; c < C; ++c) {
        if (resolved[c]) any = true;
        if (per_center[c].constant > best.constant) best = per_center[c];
    }
    if (!any)
        throw std::runtime_error(
            "cm_constant: every tube under-resolved; refine the rule or enlarge radii");
    return best;
}

TubeSup tube_sup_density(const std::function<double(std::span<const cxd>)>& g,
                         int n, const SupGrid& grid, const QuadRule& ball,
                         const std::function<double(double)>& denom,
                         std::size_t node_floor) {
    if (ball.domain != Domain::ball || ball.n != n)
        throw std::invalid_argument("cm_constant: matching ball rule required");
    const std::size_t N = ball.count();
    std::vector<double> gv(N);
    parallel_for(N, [&](std::size_t i) { gv[i] = g(ball.node(i)) * ball.weights[i]; });
    return tube_sup_density_values(std::move(gv), n, grid, ball, denom, node_floor);
}

TubeSup tube_sup(const MeasureSpec& mu, const SupGrid& grid, const QuadRule* ball,
                 const std::function<double(double)>& denom, std::size_t node_floor) {
    if (grid.n != mu.n) throw std::invalid_argument("grid/measure dimension mismatch");
    if (mu.is_discrete())
        return tube_sup_discrete(mu.masses, mu.points, mu.n, grid, denom);
    if (!ball) throw std::invalid_argument("density measure needs a ball rule");
    return tube_sup_density(mu.density, mu.n, grid, *ball, denom, node_floor);
}

} // namespace

TubeSup cm_constant_sampled(std::span<const double> density_at_nodes, double p,
                            const SupGrid& grid, const QuadRule& ball,
                            std::size_t node_floor) {
    if (!(p > 0.0)) throw std::domain_error("cm_constant: p > 0 required");
    if (density_at_nodes.size() != ball.count())
        throw std::invalid_argument("cm_constant_sampled: value/node count mismatch");
    const double np = ball.n * p;
    std::vector<double> gv(ball.count());
    for (std::size_t i = 0; i < gv.size(); ++i)
        gv[i] = density_at_nodes[i] * ball.weights[i];
    return tube_sup_density_values(std::move(gv), ball.n, grid, ball,
                                   [np](double r) { return power_denom(r, np); },
                                   node_floor);
}

TubeSup cm_constant(const MeasureSpec& mu, double p, const SupGrid& grid,
                    const QuadRule* ball, std::size_t node_floor) {
    if (!(p > 0.0)) throw std::domain_error("cm_constant: p > 0 required");
    const double np = mu.n * p;
    return tube_sup(mu, grid, ball, [np](double r) { return power_denom(r, np); },
                    node_floor);
}

TubeSup log_cm_constant(const MeasureSpec& mu, const SupGrid& grid,
                        const QuadRule* ball, std::size_t node_floor) {
    const int n = mu.n;
    return tube_sup(mu, grid, ball, [n](double r) { return log_denom(r, n); },
                    node_floor);
}

TubeSup tent_norm(const HoloFun& f, double s, const MeasureSpec& mu,
                  const SupGrid& grid, const QuadRule* ball,
                  std::size_t node_floor) {
    SpaceParams::make(mu.n, s).require_gradient_range();
    const double np = mu.n - 2.0 * s; // r^{2s-n} in front of the integral
    if (mu.is_discrete()) {
        std::vector<double> masses(mu.atom_count());
        for (std::size_t k = 0; k < mu.atom_count(); ++k)
            masses[k] = mu.masses[k] * std::norm(f.eval(mu.atom(k)));
        const MeasureSpec weighted = MeasureSpec::discrete(mu.n, std::move(masses),
                                                           mu.points);
        return tube_sup(weighted, grid, ball,
                        [np](double r) { return power_denom(r, np); }, node_floor);
    }
    const auto g = mu.density;
    const MeasureSpec weighted = MeasureSpec::from_density(
        mu.n, [g, &f](std::span<const cxd> z) { return g(z) * std::norm(f.eval(z)); });
    return tube_sup(weighted, grid, ball,
                    [np](double r) { return power_denom(r, np); }, node_floor);
}

DualSup cm_dual_constant(const MeasureSpec& mu, double p, double q,
                         std::span<const cxd> z_samples_flat, const QuadRule* ball) {
    if (!(p > 0.0 && q > 0.0))
        throw std::domain_error("cm_dual_constant: p, q > 0 required");
    const int n = mu.n;
    const std::size_t nn = static_cast<std::size_t>(n);
    const double nq = n * q, npq = n * (p + q);

    auto kernel_sum = [&](std::span<const cxd> z) -> double {
        const double zsq = norm_sq(z);
        const double num = std::pow(1.0 - zsq, nq);
        if (mu.is_discrete()) {
            Kahan<double> s;
            for (std::size_t k = 0; k < mu.atom_count(); ++k)
                s.add(mu.masses[k] * num /
                      std::pow(std::abs(1.0 - herm_inner(z, mu.atom(k))), npq));
            return s.sum;
        }
        if (!ball)
            throw std::invalid_argument("cm_dual_constant: density needs a ball rule");
        const auto r = integrate(
            [&](std::span<const cxd> w) {
                return cxd{mu.density(w) * num /
                               std::pow(std::abs(1.0 - herm_inner(z, w)), npq),
                           0.0};
            },
            *ball);
        return r.value.real();
    };

    DualSup best;
    best.argmax_z = CVec(n);
    auto consider = [&](std::span<const cxd> z) {
        const double v = std::sqrt(std::max(kernel_sum(z), 0.0));
        if (v > best.constant) {
            best.constant = v;
            best.argmax_z = CVec(std::vector<cxd>(z.begin(), z.end()));
        }
    };

    const std::size_t A = z_samples_flat.size() / nn;
    for (std::size_t i = 0; i < A; ++i) consider(z_samples_flat.subspan(i * nn, nn));

    if (mu.is_discrete()) {
        // 1-D line search along each atom direction, origin included.
        CVec z(n);
        consider(z);
        for (std::size_t k = 0; k < mu.atom_count(); ++k) {
            const auto a = mu.atom(k);
            const double anorm = std::sqrt(norm_sq(a));
            if (anorm < 1e-14) continue;
            for (int step = 1; step <= 512; ++step) {
                const double rho = step / 513.0;
                for (int j = 0; j < n; ++j) z[j] = a[j] * (rho / anorm);
                consider(z);
            }
        }
    }
    return best;
}

MeasureSpec gradient_measure(const HoloFun& f, GradKind kind,
                             const SpaceParams& params, double alpha, double t) {
    params.require_gradient_range();
    const int n = f.dim();
    switch (kind) {
        case GradKind::inv_grad:
            return MeasureSpec::from_density(n, [f](std::span<const cxd> z) {
                return f.inv_grad_sq(z) / (1.0 - norm_sq(z));
            });
        case GradKind::grad:
            return MeasureSpec::from_density(n, [f](std::span<const cxd> z) {
                return f.grad_norm_sq(z) * (1.0 - norm_sq(z));
            });
        case GradKind::radial:
            return MeasureSpec::from_density(n, [f](std::span<const cxd> z) {
                return std::norm(f.radial(z)) * (1.0 - norm_sq(z));
            });
        case GradKind::tangential_sum:
            if (n < 2)
                throw std::domain_error(
                    "gradient_measure: no tangential directions for n = 1");
            return MeasureSpec::from_density(n, [f](std::span<const cxd> z) {
                return f.tangential_sum_sq(z);
            });
        case GradKind::frac: {
            if (!(t > std::max(0.0, -params.s)))
                throw std::domain_error(
                    "gradient_measure: frac kind requires t > max{0, -s}");
            const HoloFun g = frac_deriv(f, alpha, t);
            const double e = 2.0 * t - 1.0;
            return MeasureSpec::from_density(n, [g, e](std::span<const cxd> z) {
                return std::norm(g.eval(z)) * std::pow(1.0 - norm_sq(z), e);
            });
        }
    }
    throw std::logic_error("gradient_measure: unknown kind");
}

void check_tab_hypotheses(int n, double p, double eta, double a, double b) {
    const double hi = (n + 1.0) / n;
    if (!(p > 0.0 && p < hi))
        throw std::domain_error("T_{a,b}: p must lie in (0, (n+1)/n)");
    if (!(eta > 0.0 && eta < hi))
        throw std::domain_error("T_{a,b}: eta must lie in (0, (n+1)/n)");
    const double lo = std::max(-(1.0 + eta) / 2.0, -(1.0 + eta + n * (1.0 - p)) / 2.0);
    if (!(a > lo))
        throw std::domain_error("T_{a,b}: a must exceed max{-(1+eta)/2, -(1+eta+n(1-p))/2}");
    if (!(b > (1.0 + eta) / 2.0))
        throw std::domain_error("T_{a,b}: b must exceed (1+eta)/2");
}

std::function<double(std::span<const cxd>)> tab_operator(
    const std::function<double(std::span<const cxd>)>& f, double a, double b,
    double p, double eta, const QuadRule& ball) {
    check_tab_hypotheses(ball.n, p, eta, a, b);
    const double expo = ball.n + a + b;
    const QuadRule* rule = &ball;
    return [f, expo, b, rule](std::span<const cxd> z) -> double {
        const auto r = integrate(
            [&](std::span<const cxd> w) {
                return cxd{f(w) / std::pow(std::abs(1.0 - herm_inner(z, w)), expo),
                           0.0};
            },
            *rule, Weight::power(b - 1.0));
        return r.value.real();
    };
}

std::vector<double> tab_apply(const std::function<double(std::span<const cxd>)>& f,
                              double a, double b, double p, double eta,
                              const QuadRule& inner, const QuadRule& outer) {
    check_tab_hypotheses(inner.n, p, eta, a, b);
    if (outer.n != inner.n)
        throw std::invalid_argument("tab_apply: rule dimension mismatch");
    const int n = inner.n;
    const std::size_t nn = static_cast<std::size_t>(n);
    const double expo = -(n + a + b) / 2.0; // applied to |1-<z,w>|^2
    const std::size_t M = inner.count();
    std::vector<double> q(M);
    parallel_for(M, [&](std::size_t i) {
        const auto w = inner.node(i);
        q[i] = inner.weights[i] * f(w) *
               std::pow(1.0 - norm_sq(w), (b - 1.0) - inner.radial_power);
    });
    std::vector<double> out(outer.count());
    parallel_for(outer.count(), [&](std::size_t j) {
        const cxd* z = outer.nodes.data() + j * nn;
        Kahan<double> acc;
        for (std::size_t i = 0; i < M; ++i) {
            const cxd u = 1.0 - herm_inner_raw(z, inner.nodes.data() + i * nn, nn);
            acc.add(q[i] * std::pow(std::norm(u), expo));
        }
        out[j] = acc.sum;
    });
    return out;
}

FrCheck forelli_rudin_check(double s, double r, double t, const CVec& z,
                            const CVec& w, const QuadRule& ball) {
    if (!(s > -1.0)) throw std::domain_error("forelli_rudin: s > -1 required");
    if (!(r >= 0.0 && t >= 0.0))
        throw std::domain_error("forelli_rudin: r, t >= 0 required");
    const int n = ball.n;
    if (!(r + t - s > n + 1.0))
        throw std::domain_error("forelli_rudin: r + t - s > n + 1 required");
    const double dr = r - s - (n + 1.0), dt = t - s - (n + 1.0);
    if (std::abs(dr) < 1e-9 || std::abs(dt) < 1e-9)
        throw std::domain_error("forelli_rudin: parameters on a case boundary (ambiguous case)");
    require_interior(z.span(), "forelli_rudin: z");
    require_interior(w.span(), "forelli_rudin: w");

    FrCheck out;
    const auto lhs = integrate(
        [&](std::span<const cxd> zeta) {
            const double kz = std::pow(std::abs(1.0 - herm_inner(z, zeta)), r);
            const double kw = std::pow(std::abs(1.0 - herm_inner(w, zeta)), t);
            return cxd{1.0 / (kz * kw), 0.0};
        },
        ball, Weight::power(s));
    out.lhs = lhs.value.real();

    const double cross = std::abs(1.0 - herm_inner(w.span(), z.span()));
    if (dr < 0.0 && dt < 0.0) {
        out.case_id = 1;
        out.rhs_bound = std::pow(cross, s + n + 1.0 - r - t);
    } else if (dr > 0.0 && dt < 0.0) {
        out.case_id = 2;
        out.rhs_bound =
            std::pow(1.0 - z.norm_sq(), s + n + 1.0 - r) / std::pow(cross, t);
    } else if (dr < 0.0 && dt > 0.0) {
        // symmetric to case 2 with (z,r) <-> (w,t)
        out.case_id = 2;
        out.rhs_bound =
            std::pow(1.0 - w.norm_sq(), s + n + 1.0 - t) / std::pow(cross, r);
    } else {
        out.case_id = 3;
        out.rhs_bound =
            std::pow(1.0 - z.norm_sq(), s + n + 1.0 - r) / std::pow(cross, t) +
            std::pow(1.0 - w.norm_sq(), s + n + 1.0 - t) / std::pow(cross, r);
    }
    out.ratio = out.lhs / out.rhs_bound;
    return out;
}

} // namespace holoball
