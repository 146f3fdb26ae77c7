#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "holoball/cvec.hpp"

namespace holoball {

enum class Domain : std::uint8_t { sphere = 0, ball = 1 };
enum class RuleKind : std::uint8_t { tensor = 0, monte_carlo = 1, quasi_mc = 2 };

/// Node/weight set for S_n or B_n. Nodes are stored flat with stride n.
///
/// For radial_power == 0 the weights integrate the normalized measure
/// (sigma or nu), so they sum to 1. A rule built with radial_power = c
/// (ball only, Gauss-Jacobi radial factor) instead satisfies
///   sum_i w_i g(z_i) ~ int g(z) (1-|z|^2)^c dnu(z),
/// and the weights sum to n.B(n, c+1).
struct QuadRule {
    Domain domain;
    int n = 1;
    int level = 1;
    RuleKind kind = RuleKind::tensor;
    std::uint64_t seed = 0;
    double radial_power = 0.0;
    double est_error = 0.0;
    std::vector<cxd> nodes; // count*n entries
    std::vector<double> weights;

    std::size_t count() const { return weights.size(); }
    std::span<const cxd> node(std::size_t i) const {
        return {nodes.data() + i * static_cast<std::size_t>(n),
                static_cast<std::size_t>(n)};
    }
    double weight_sum() const;
    void validate() const; // invariant checks (weight sum, node location)
};

/// Number of batches used for the standard-error estimate of MC/QMC rules.
inline constexpr int kErrorBatches = 16;

/// Quadrature nodes for sigma on S_n.
/// n = 1: trapezoidal rule on the circle with 64 * 2^(level-1) nodes (exact
/// for trigonometric polynomials below the node count).
/// n >= 2: 2^(13+level) equal-weight samples; monte_carlo draws normalized
/// complex Gaussians, quasi_mc uses kErrorBatches Cranley-Patterson shifted
/// Halton streams (the batches double as the error-estimate groups).
QuadRule sphere_rule(int n, int level, std::uint64_t seed,
                     RuleKind kind = RuleKind::quasi_mc);

/// Quadrature nodes for nu on B_n (radial_power = 0) or for the weighted
/// measure (1-|z|^2)^c dnu (radial_power = c, tensor radial x QMC directions).
/// n = 1 uses Gauss-Jacobi radial x trapezoid angular tensor nodes.
QuadRule ball_rule(int n, int level, std::uint64_t seed,
                   RuleKind kind = RuleKind::quasi_mc);
QuadRule power_ball_rule(int n, double c, int level, std::uint64_t seed);
QuadRule power_ball_rule_custom(int n, double c, int n_radial, std::size_t n_dir,
                                std::uint64_t seed);

/// Gauss-Jacobi rule on [0,1] for the weight u^beta (1-u)^alpha:
/// sum_i w_i h(u_i) = int_0^1 h(u) u^beta (1-u)^alpha du.
void gauss_jacobi01(int npts, double alpha, double beta, std::vector<double>& u,
                    std::vector<double>& w);

/// Fixed-layout little-endian cache (see README for the byte layout).
void save_rule(const QuadRule& rule, const std::filesystem::path& file);
QuadRule load_rule(const std::filesystem::path& file);
std::string rule_cache_name(Domain d, int n, int level, RuleKind kind,
                            std::uint64_t seed);

/// Exact value of int_{S_n} |zeta^m|^2 dsigma = (n-1)! m! / (n-1+|m|)!.
double sphere_monomial_sq_integral(std::span<const int> m);
/// Exact value of int_{B_n} |z^m|^2 dnu = n! m! / (n+|m|)!.
double ball_monomial_sq_integral(std::span<const int> m);

} // namespace holoball
