#pragma once

#include <cstdint>
#include <filesystem>

#include "holoball/carleson.hpp"
#include "holoball/holofun.hpp"

namespace holoball {

/// A greedy r/2-separated point set in the Bergman metric, truncated to
/// {|z| <= rho_max}, with packing statistics over a fresh probe set.
struct Lattice {
    int n = 1;
    double r = 0.0;
    double rho_max = 0.0;
    std::uint64_t seed = 0;
    std::vector<cxd> points; // flat, stride n
    bool complete = true;    // false when the candidate budget ran out

    struct Stats {
        double min_pairwise_beta = 0.0;
        double covering_fraction = 0.0; // probes within beta <= r of the set
        int max_overlap_quarter = 0;    // r/4-ball overlap count over probes
        std::size_t probes = 0;
    } stats;

    std::size_t count() const { return points.size() / n; }
    std::span<const cxd> point(std::size_t k) const {
        return {points.data() + k * static_cast<std::size_t>(n),
                static_cast<std::size_t>(n)};
    }
};

/// Greedy construction: candidates stream from a seeded quasi-random
/// sequence in {|z| <= rho_max}; a candidate is accepted iff its Bergman
/// distance to every accepted point is >= r/2; generation stops when a full
/// candidate pass yields no acceptance (or the candidate budget is hit,
/// flagged by complete = false). Stats use probes inside the Bergman-r
/// inward margin of the truncation radius.
Lattice generate_lattice(int n, double r, double rho_max, std::uint64_t seed,
                         std::size_t pass_size = 4096,
                         std::size_t max_candidates = 1u << 20,
                         std::size_t probe_count = 10000);

/// Text cache: "n r rho_max seed count" header plus one point per row.
void save_lattice(const Lattice& lat, const std::filesystem::path& file);
Lattice load_lattice(const std::filesystem::path& file);

/// f_a(z) = (1-|a|^2)^{n-s} (1-<z,a>)^{-n}, the canonical norm-bounded
/// family; the scalar prefactor is folded into the atom coefficient.
HoloFun canonical_atom(const CVec& a, double s, int n);

/// f(z) = sum_k c_k (1-|a_k|^2)^b (1-<z,a_k>)^{-b}, b > n.
HoloFun synthesize(std::span<const cxd> coeffs, std::span<const cxd> centers_flat,
                   int n, double b);

enum class CoeffWeight { dimension, shifted }; // (1-|a|^2)^n vs (1-|a|^2)^{n-2s}

/// cm_constant, with p = 1 - 2s/n, of the discrete measure
/// sum_k |c_k|^2 (1-|a_k|^2)^w delta_{a_k} with w per the selected flavor.
TubeSup coeff_cm(std::span<const cxd> coeffs, std::span<const cxd> centers_flat,
                 int n, double s, const SupGrid& grid,
                 CoeffWeight flavor = CoeffWeight::dimension);

/// Atom list file: "re(c) im(c) re(a1) im(a1) ... re(an) im(an) b" per line
/// (the discrete-measure layout with a complex coefficient and a b column).
struct AtomList {
    std::vector<cxd> coeffs;
    std::vector<cxd> centers; // flat, stride n
    double b = 0.0;
};
void save_atoms(const AtomList& atoms, int n, const std::filesystem::path& file);
AtomList load_atoms(int n, const std::filesystem::path& file);

} // namespace holoball
