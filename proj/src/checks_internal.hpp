#pragma once

#include <string>
#include <vector>

#include "holoball/checks.hpp"
#include "holoball/holofun.hpp"
#include "holoball/rng.hpp"

namespace holoball::detail {

CVec random_interior(int n, Xoshiro256ss& rng, double rmax);
std::vector<cxd> random_interior_flat(int n, std::size_t count, Xoshiro256ss& rng,
                                      double rmax);
CVec random_boundary(int n, Xoshiro256ss& rng);
HoloFun random_poly(int n, int maxdeg, Xoshiro256ss& rng);
HoloFun random_mixed(int n, Xoshiro256ss& rng, double atom_rmax = 0.7);

struct TestFamily {
    std::vector<HoloFun> fs;
    std::vector<std::string> labels;
};

/// Unit-coefficient kernels (1-<z,a>)^{-n} for |a| in a fixed ladder plus
/// random degree-<=5 polynomials. Norm ratios are scale-invariant, so the
/// canonical prefactor is irrelevant here and the same profile serves every
/// s value.
TestFamily norm_family(int n, std::uint64_t seed, std::size_t n_atoms,
                       std::size_t n_polys);

double bracket_of_ratios(const std::vector<double>& ratios);

CheckResult check_mobius(const CheckContext& ctx);                // 1
CheckResult check_quadrature(const CheckContext& ctx);            // 2
CheckResult check_tangential(const CheckContext& ctx);            // 3
CheckResult check_fractional(const CheckContext& ctx);            // 4
CheckResult check_gleason(const CheckContext& ctx);               // 5
CheckResult check_riemann_stieltjes(const CheckContext& ctx);     // 6
CheckResult check_carleson_oracle(const CheckContext& ctx);       // 7
CheckResult check_norm_equivalence(const CheckContext& ctx);      // 8
CheckResult check_gradient_characterizations(const CheckContext&);// 9
CheckResult check_canonical_atom(const CheckContext& ctx);        // 10
CheckResult check_lattice(const CheckContext& ctx);               // 11
CheckResult check_tent(const CheckContext& ctx);                  // 12
CheckResult check_tab_preservation(const CheckContext& ctx);      // 13
CheckResult check_forelli_rudin(const CheckContext& ctx);         // 14

} // namespace holoball::detail
