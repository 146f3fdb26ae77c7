#include "holoball/supgrid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "holoball/rng.hpp"

namespace holoball {

namespace {

void fill_boundary_points(int n, std::size_t count, std::uint64_t seed,
                          std::vector<cxd>& out) {
    out.assign(count * n, cxd{0.0, 0.0});
    if (n == 1) {
        for (std::size_t j = 0; j < count; ++j) {
            const double th = 2.0 * std::numbers::pi * j / static_cast<double>(count);
            out[j] = cxd{std::cos(th), std::sin(th)};
        }
        return;
    }
    // First center pinned to e_1, the rest quasi-uniform via shifted Halton
    // through Box-Muller directions.
    out[0] = cxd{1.0, 0.0};
    Xoshiro256ss rng(stream_seed(seed, "grid_centers"));
    double shift[16], u[16], g[16];
    for (int d = 0; d < 2 * n; ++d) shift[d] = rng.uniform();
    for (std::size_t j = 1; j < count; ++j) {
        for (int d = 0; d < 2 * n; ++d) {
            double v = radical_inverse(j, kHaltonPrimes[d]) + shift[d];
            u[d] = v - std::floor(v);
        }
        for (int k = 0; k < n; ++k)
            box_muller(std::max(u[2 * k], 0x1.0p-64), u[2 * k + 1], g[2 * k],
                       g[2 * k + 1]);
        double nrm = 0.0;
        for (int d = 0; d < 2 * n; ++d) nrm += g[d] * g[d];
        nrm = std::sqrt(nrm);
        for (int k = 0; k < n; ++k)
            out[j * n + k] = cxd{g[2 * k] / nrm, g[2 * k + 1] / nrm};
    }
}

} // namespace

std::vector<cxd> SupGrid::a_samples() const {
    std::vector<cxd> out;
    out.reserve((center_count() * radii.size() + interior_count()) * n);
    for (std::size_t c = 0; c < center_count(); ++c) {
        const auto zeta = center(c);
        for (double r : radii) {
            const double scale = 1.0 - std::min(r, 1.0 - 1e-12);
            for (int k = 0; k < n; ++k) out.push_back(scale * zeta[k]);
        }
    }
    out.insert(out.end(), interior.begin(), interior.end());
    return out;
}

void SupGrid::validate() const {
    if (centers.empty() || radii.empty())
        throw std::invalid_argument("SupGrid: centers and radii must be non-empty");
    double prev = 0.0;
    for (double r : radii) {
        if (!(r > 0.0 && r <= 2.0))
            throw std::invalid_argument("SupGrid: radii must lie in (0, 2]");
        if (r < prev) throw std::invalid_argument("SupGrid: radii must ascend");
        prev = r;
    }
    for (std::size_t c = 0; c < center_count(); ++c)
        if (std::abs(std::sqrt(norm_sq(center(c))) - 1.0) > kBoundaryTol)
            throw std::invalid_argument("SupGrid: centers must lie on the sphere");
}

SupGrid make_grid(int n, std::size_t n_centers, std::size_t n_radii, double r_min,
                  double r_max, std::size_t n_extra_interior, std::uint64_t seed) {
    if (!(0.0 < r_min && r_min <= r_max && r_max <= 2.0))
        throw std::invalid_argument("make_grid: need 0 < r_min <= r_max <= 2");
    SupGrid grid;
    grid.n = n;
    fill_boundary_points(n, n_centers, seed, grid.centers);
    grid.radii.resize(n_radii);
    if (n_radii == 1) {
        grid.radii[0] = r_max;
    } else {
        const double lg = std::log(r_max / r_min) / static_cast<double>(n_radii - 1);
        for (std::size_t j = 0; j < n_radii; ++j)
            grid.radii[j] = r_min * std::exp(lg * static_cast<double>(j));
        grid.radii.back() = r_max;
    }
    // Extra interior a-samples: uniform under nu, kept away from the boundary.
    Xoshiro256ss rng(stream_seed(seed, "grid_interior"));
    grid.interior.reserve(n_extra_interior * n);
    double g[16];
    for (std::size_t i = 0; i < n_extra_interior; ++i) {
        for (int k = 0; k < n; ++k)
            box_muller(rng.uniform_pos(), rng.uniform(), g[2 * k], g[2 * k + 1]);
        double nrm = 0.0;
        for (int d = 0; d < 2 * n; ++d) nrm += g[d] * g[d];
        nrm = std::sqrt(nrm);
        const double r = 0.98 * std::pow(rng.uniform_pos(), 1.0 / (2.0 * n));
        for (int k = 0; k < n; ++k)
            grid.interior.push_back(cxd{g[2 * k] / nrm * r, g[2 * k + 1] / nrm * r});
    }
    grid.validate();
    return grid;
}

SupGrid default_grid(int n, std::uint64_t seed) {
    return make_grid(n, n == 1 ? 64 : 256, 12, 0.02, 1.0, 64, seed);
}

std::vector<cxd> shell_samples(int n, std::size_t n_dirs, std::uint64_t seed,
                               bool include_boundary) {
    std::vector<cxd> dirs;
    fill_boundary_points(n, n_dirs, seed, dirs);
    std::vector<double> shells = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6,
                                  0.7, 0.8, 0.9, 0.95, 0.99};
    if (include_boundary) shells.push_back(1.0);
    std::vector<cxd> out;
    out.reserve(shells.size() * dirs.size() + n);
    out.insert(out.end(), static_cast<std::size_t>(n), cxd{0.0, 0.0}); // origin
    for (double rho : shells)
        for (std::size_t j = 0; j < n_dirs; ++j)
            for (int k = 0; k < n; ++k) out.push_back(rho * dirs[j * n + k]);
    return out;
}

} // namespace holoball
