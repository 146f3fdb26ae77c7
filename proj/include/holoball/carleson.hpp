#pragma once

#include <filesystem>
#include <functional>
#include <optional>

#include "holoball/holofun.hpp"
#include "holoball/integrate.hpp"
#include "holoball/norms.hpp"
#include "holoball/supgrid.hpp"

namespace holoball {

/// Positive Borel measure on B_n: either finitely many point masses at
/// interior points, or a nonnegative density against nu sampled through a
/// ball rule.
struct MeasureSpec {
    int n = 1;
    // Discrete variant (empty for densities).
    std::vector<double> masses;
    std::vector<cxd> points; // flat, stride n
    // Density variant (null for discrete).
    std::function<double(std::span<const cxd>)> density;

    bool is_discrete() const { return !density; }
    std::size_t atom_count() const { return masses.size(); }
    std::span<const cxd> atom(std::size_t k) const {
        return {points.data() + k * static_cast<std::size_t>(n),
                static_cast<std::size_t>(n)};
    }

    static MeasureSpec discrete(int n, std::vector<double> masses,
                                std::vector<cxd> points_flat);
    static MeasureSpec from_density(int n,
                                    std::function<double(std::span<const cxd>)> g);

    double total_mass(const QuadRule* rule = nullptr) const;
};

/// Measure file format: one line per atom, "w re(a1) im(a1) ... re(an) im(an)".
void save_discrete(const MeasureSpec& mu, const std::filesystem::path& file);
MeasureSpec load_discrete(int n, const std::filesystem::path& file);

struct TubeSup {
    double constant = 0.0; // the rooted value
    double argmax_r = 0.0;
    std::size_t argmax_center = 0;
};

/// ||mu||_{CM_p} = sup (mu(Q_r(zeta)) / r^{np})^{1/2}, sampled over the grid
/// centers. For discrete measures the r-supremum per center is exact: the
/// ratio is decreasing between mass jumps, so only the jump radii
/// d_k = |1 - <a_k, zeta>| (and r_max) are candidates. Densities are sampled
/// through the rule's nodes at the grid radii, honoring the node floor.
TubeSup cm_constant(const MeasureSpec& mu, double p, const SupGrid& grid,
                    const QuadRule* ball = nullptr,
                    std::size_t node_floor = kCapNodeFloor);

/// Same supremum with the log-Carleson denominator r^n (log(2/r))^{-2}.
TubeSup log_cm_constant(const MeasureSpec& mu, const SupGrid& grid,
                        const QuadRule* ball = nullptr,
                        std::size_t node_floor = kCapNodeFloor);

/// Dual form: sup_z (int (1-|z|^2)^{nq} / |1-<z,w>|^{n(p+q)} dmu(w))^{1/2}
/// over the z-samples; for discrete measures a 1-D line search along each
/// atom direction is added to the candidate set.
struct DualSup {
    double constant = 0.0;
    CVec argmax_z;
};
DualSup cm_dual_constant(const MeasureSpec& mu, double p, double q,
                         std::span<const cxd> z_samples_flat,
                         const QuadRule* ball = nullptr);

/// Tent-space norm sup (r^{2s-n} int_{Q_r} |f|^2 dmu)^{1/2}; identical
/// machinery to cm_constant with the measure reweighted by |f|^2, so
/// tent_norm(1, s, mu) == cm_constant(mu, 1-2s/n) exactly on a shared grid.
TubeSup tent_norm(const HoloFun& f, double s, const MeasureSpec& mu,
                  const SupGrid& grid, const QuadRule* ball = nullptr,
                  std::size_t node_floor = kCapNodeFloor);

enum class GradKind { inv_grad, grad, radial, tangential_sum, frac };

/// The gradient-induced densities:
///   inv_grad       |invgrad f|^2 (1-|z|^2)^{-1}
///   grad           |grad f|^2 (1-|z|^2)
///   radial         |Rf|^2 (1-|z|^2)
///   tangential_sum sum_{i<j} |T_{i,j} f|^2          (n >= 2)
///   frac           |R^{alpha,t} f|^2 (1-|z|^2)^{2t-1}, t > max{0,-s}
MeasureSpec gradient_measure(const HoloFun& f, GradKind kind,
                             const SpaceParams& params, double alpha = 0.0,
                             double t = 1.0);

/// T_{a,b} f(z) = int (1-|w|^2)^{b-1} / |1-<z,w>|^{n+a+b} f(w) dnu(w),
/// under the preservation-theorem hypotheses on (p, eta, a, b).
std::function<double(std::span<const cxd>)> tab_operator(
    const std::function<double(std::span<const cxd>)>& f, double a, double b,
    double p, double eta, const QuadRule& ball);

/// Batched form of tab_operator: T_{a,b} f at every node of the outer rule,
/// with the inner integrand precomputed once. Same contract and values.
std::vector<double> tab_apply(const std::function<double(std::span<const cxd>)>& f,
                              double a, double b, double p, double eta,
                              const QuadRule& inner, const QuadRule& outer);

void check_tab_hypotheses(int n, double p, double eta, double a, double b);

/// cm_constant of the density whose values at the rule's nodes are given
/// (value i corresponds to ball.node(i); weights applied internally).
TubeSup cm_constant_sampled(std::span<const double> density_at_nodes, double p,
                            const SupGrid& grid, const QuadRule& ball,
                            std::size_t node_floor = kCapNodeFloor);

struct FrCheck {
    double lhs = 0.0;
    double rhs_bound = 0.0;
    double ratio = 0.0;
    int case_id = 0; // 1: both small, 2: r-s large, 3: both large
};

/// lhs = int (1-|zeta|^2)^s / (|1-<z,zeta>|^r |1-<w,zeta>|^t) dnu(zeta)
/// against the three-case comparison bound. Parameters within 1e-9 of a case
/// boundary are rejected as ambiguous.
FrCheck forelli_rudin_check(double s, double r, double t, const CVec& z,
                            const CVec& w, const QuadRule& ball);

} // namespace holoball
