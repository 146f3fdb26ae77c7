#pragma once

#include <cstdint>
#include <vector>

#include "holoball/cvec.hpp"

namespace holoball {

/// Discretization of the suprema over caps/tubes and Mobius centers:
/// boundary cap centers, log-spaced radii, and interior a-samples. The
/// a-samples are the tube-adapted points a = (1-r) zeta plus extra random
/// interior points. Enlarging a grid (superset) can only increase any
/// sampled supremum taken over it.
struct SupGrid {
    int n = 1;
    std::vector<cxd> centers;  // flat boundary points, stride n
    std::vector<double> radii; // ascending, within (0, 2]
    std::vector<cxd> interior; // flat extra a-samples, stride n

    std::size_t center_count() const { return centers.size() / n; }
    std::span<const cxd> center(std::size_t i) const {
        return {centers.data() + i * static_cast<std::size_t>(n),
                static_cast<std::size_t>(n)};
    }
    std::size_t interior_count() const { return interior.size() / n; }
    std::span<const cxd> interior_point(std::size_t i) const {
        return {interior.data() + i * static_cast<std::size_t>(n),
                static_cast<std::size_t>(n)};
    }

    /// All Mobius sample points: centers x radii via a = (1-r) zeta, then the
    /// extra interior points. Flat, stride n.
    std::vector<cxd> a_samples() const;

    void validate() const;
};

SupGrid make_grid(int n, std::size_t n_centers, std::size_t n_radii, double r_min,
                  double r_max, std::size_t n_extra_interior, std::uint64_t seed);

/// Default grid: 64 (n=1) / 256 (n>=2) quasi-uniform centers, 12 log-spaced
/// radii in [0.02, 1], 64 extra interior samples. The first center is e_1.
SupGrid default_grid(int n, std::uint64_t seed);

/// Radial-shell times direction pointwise sample set (for sampled sup-norms),
/// including the origin and the boundary shell.
std::vector<cxd> shell_samples(int n, std::size_t n_dirs, std::uint64_t seed,
                               bool include_boundary = true);

} // namespace holoball
