#pragma once

#include <optional>
#include <string>
#include <vector>

#include "holoball/holofun.hpp"
#include "holoball/integrate.hpp"
#include "holoball/quadrule.hpp"
#include "holoball/supgrid.hpp"

namespace holoball {

enum class Regime { lipschitz, bmoa, morrey, hardy };
enum class QpRegime { constants, fractional_scale, bmoa, bloch };

/// Dimension and smoothness index with the induced exponent p = 1 - 2s/n.
struct SpaceParams {
    int n;
    double s;

    double p() const { return 1.0 - 2.0 * s / n; }

    /// Validates the defining range s in (-1, n/2].
    static SpaceParams make(int n, double s);
    /// The stricter range s in (-1/2, n/2] (Mobius/Green characterizations).
    void require_transform_range() const;
    /// The open range s in (-1/2, n/2) (gradient/tent characterizations).
    void require_gradient_range() const;
};

Regime regime(const SpaceParams& params);
std::string regime_label(Regime r);

QpRegime qp_regime(int n, double p);
std::string qp_regime_label(QpRegime r);

/// Sup over r of the sphere L2 means; attained at r = 1 for these functions,
/// so computed as the boundary integral.
double hardy2_norm(const HoloFun& f, const QuadRule& sphere);

/// Optional radial-scan values at the given radii (monotonicity check).
std::vector<double> hardy2_radial_scan(const HoloFun& f, const QuadRule& sphere,
                                       std::span<const double> radii);

/// A sampled-supremum result: the norm value, its seminorm part, and the
/// maximizer within the declared grid.
struct NormReport {
    double value = 0.0;
    double seminorm = 0.0;
    double hardy_part = 0.0;
    double argmax_r = 0.0;        // radius of the maximizing cap / a-sample
    std::size_t argmax_center = 0; // center (or a-sample) index
    std::size_t nodes_used = 0;
};

// The s-independent raw integrals are computed once per (f, grid, rule) and
// swept over s afterwards; all three characterizations share one grid so the
// cross-characterization ratios compare like against like.

struct CapProfile {
    std::size_t n_centers = 0;
    std::vector<double> radii;
    std::vector<double> osc;  // [center * n_radii + radius]: cap oscillation
    std::vector<double> mass; // sigma(cap)
    std::size_t nodes_used = 0;
};

CapProfile cap_profile(const HoloFun& f, const SupGrid& grid, const QuadRule& sphere,
                       std::size_t node_floor = kCapNodeFloor);

struct ASampleProfile {
    std::vector<cxd> a;           // flat, stride n
    int n = 1;
    std::vector<double> integral; // per a-sample
    std::size_t nodes_used = 0;
    double excluded_bound = 0.0; // Green path only: singular-ball remainder
};

/// I(a) = int_{S_n} |f(phi_a(zeta)) - f(a)|^2 dsigma(zeta).
ASampleProfile mobius_profile(const HoloFun& f, std::vector<cxd> a_flat, int n,
                              const QuadRule& sphere);

/// J(a) = int_{B_n} |invgrad f|^2 G(z,a) dlambda(z), evaluated after the
/// involution z = phi_a(w) which moves the Green singularity to the origin;
/// nodes with beta(w,0) < sing_cutoff are excluded and the remainder bound
/// is reported.
ASampleProfile green_profile(const HoloFun& f, std::vector<cxd> a_flat, int n,
                             const QuadRule& ball, double sing_cutoff = 0.05);

NormReport osc_norm_from_profile(const CapProfile& prof, double hardy,
                                 const SpaceParams& params);
NormReport mobius_norm_from_profile(const ASampleProfile& prof,
                                    const SpaceParams& params);
NormReport green_norm_from_profile(const ASampleProfile& prof,
                                   const SpaceParams& params);

/// Hardy norm plus the sampled sup of (r^{2s-n} int_cap |f - f_cap|^2)^{1/2}.
NormReport campanato_norm_osc(const HoloFun& f, const SpaceParams& params,
                              const SupGrid& grid, const QuadRule& sphere);

/// Sampled sup of (1-|a|^2)^s || f o phi_a - f(a) ||_{H2}.
NormReport campanato_norm_mobius(const HoloFun& f, const SpaceParams& params,
                                 const SupGrid& grid, const QuadRule& sphere);

/// Sampled sup of ((1-|a|^2)^{2s} int |invgrad f|^2 G(z,a) dlambda)^{1/2}.
NormReport campanato_norm_green(const HoloFun& f, const SpaceParams& params,
                                const SupGrid& grid, const QuadRule& ball);

/// int_{B_n} |grad f(z)|^2 G(phi_omega(z))^p dnu(z) for one omega.
double qp_integral(const HoloFun& f, double p, std::span<const cxd> omega,
                   const QuadRule& ball, double sing_cutoff = 0.05,
                   double* excluded_bound = nullptr);

/// Sampled sup over omega of the square root of the above.
NormReport qp_norm(const HoloFun& f, double p, std::span<const cxd> omegas_flat,
                   int n, const QuadRule& ball, double sing_cutoff = 0.05);

double bloch_alpha_norm(const HoloFun& f, double alpha,
                        std::span<const cxd> z_samples_flat);
double hinf_norm(const HoloFun& f, std::span<const cxd> z_samples_flat);

/// sup over samples of |grad f(z)| (1-|z|^2)^{1+s} / osc_norm. Throws for a
/// (near-)constant f, whose ratio is undefined.
double growth_ratio(const HoloFun& f, const SpaceParams& params,
                    std::span<const cxd> z_samples_flat, double osc_norm);

} // namespace holoball
