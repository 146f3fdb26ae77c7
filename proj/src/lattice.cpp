#include "holoball/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "holoball/mobius.hpp"
#include "holoball/reduce.hpp"
#include "holoball/rng.hpp"

namespace holoball {

namespace {

// Quasi-random stream over the cube [-rho,rho]^{2n}, rejected to the ball.
struct CandidateStream {
    int n;
    double rho;
    double shift[16];
    std::uint64_t index = 0;

    CandidateStream(int n_, double rho_, std::uint64_t seed) : n(n_), rho(rho_) {
        Xoshiro256ss rng(stream_seed(seed, "lattice_candidates"));
        for (int d = 0; d < 2 * n; ++d) shift[d] = rng.uniform();
    }

    void next(cxd* out) {
        double u;
        while (true) {
            ++index;
            double nsq = 0.0;
            for (int d = 0; d < 2 * n; ++d) {
                u = radical_inverse(index, kHaltonPrimes[d]) + shift[d];
                u -= std::floor(u);
                const double x = rho * (2.0 * u - 1.0);
                reinterpret_cast<double*>(out)[d] = x;
                nsq += x * x;
            }
            if (nsq <= rho * rho) return;
        }
    }
};

double beta_raw(const cxd* z, const cxd* w, int n) {
    const double t = (1.0 - norm_sq(std::span<const cxd>(z, n))) *
                     (1.0 - norm_sq(std::span<const cxd>(w, n))) /
                     std::norm(1.0 - herm_inner_raw(w, z, static_cast<std::size_t>(n)));
    const double m2 = 1.0 - t;
    const double m = m2 <= 0.0 ? 0.0 : std::sqrt(m2);
    return std::atanh(std::min(m, 1.0 - 1e-17));
}

} // namespace

Lattice generate_lattice(int n, double r, double rho_max, std::uint64_t seed,
                         std::size_t pass_size, std::size_t max_candidates,
                         std::size_t probe_count) {
    if (!(r > 0.0 && r <= 1.0))
        throw std::invalid_argument("generate_lattice: r must lie in (0, 1]");
    if (!(rho_max > 0.0 && rho_max < 1.0))
        throw std::invalid_argument("generate_lattice: rho_max must lie in (0, 1)");
    if (n > 8) throw std::invalid_argument("generate_lattice: n <= 8");

    Lattice lat;
    lat.n = n;
    lat.r = r;
    lat.rho_max = rho_max;
    lat.seed = seed;

    CandidateStream stream(n, rho_max, seed);
    cxd cand[8];
    const double half = r / 2.0;
    std::size_t drawn = 0;
    lat.complete = false;
    while (drawn < max_candidates) {
        std::size_t accepted_this_pass = 0;
        for (std::size_t i = 0; i < pass_size && drawn < max_candidates; ++i, ++drawn) {
            stream.next(cand);
            bool ok = true;
            for (std::size_t k = 0; k < lat.count(); ++k) {
                if (beta_raw(cand, lat.points.data() + k * n, n) < half) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                lat.points.insert(lat.points.end(), cand, cand + n);
                ++accepted_this_pass;
            }
        }
        if (accepted_this_pass == 0) {
            lat.complete = true;
            break;
        }
    }

    // Stats over fresh probes in the Bergman-r inward margin.
    const double rho_probe = std::max(bergman_step_inward(rho_max, r), 0.0);
    Xoshiro256ss rng(stream_seed(seed, "lattice_probes"));
    std::vector<cxd> probes(probe_count * n);
    double g[16];
    for (std::size_t i = 0; i < probe_count; ++i) {
        for (int k = 0; k < n; ++k)
            box_muller(rng.uniform_pos(), rng.uniform(), g[2 * k], g[2 * k + 1]);
        double nrm = 0.0;
        for (int d = 0; d < 2 * n; ++d) nrm += g[d] * g[d];
        nrm = std::sqrt(nrm);
        const double rr = rho_probe * std::pow(rng.uniform_pos(), 1.0 / (2.0 * n));
        for (int k = 0; k < n; ++k)
            probes[i * n + k] = cxd{g[2 * k] / nrm * rr, g[2 * k + 1] / nrm * rr};
    }
    std::vector<std::uint8_t> covered(probe_count, 0);
    std::vector<int> overlap(probe_count, 0);
    parallel_for(probe_count, [&](std::size_t i) {
        const cxd* w = probes.data() + i * n;
        int quarter = 0;
        bool cov = false;
        for (std::size_t k = 0; k < lat.count(); ++k) {
            const double b = beta_raw(w, lat.points.data() + k * n, n);
            if (b <= r) cov = true;
            if (b < r / 4.0) ++quarter;
        }
        covered[i] = cov ? 1 : 0;
        overlap[i] = quarter;
    });
    std::size_t ncov = 0;
    int maxover = 0;
    for (std::size_t i = 0; i < probe_count; ++i) {
        ncov += covered[i];
        maxover = std::max(maxover, overlap[i]);
    }
    lat.stats.covering_fraction =
        probe_count ? static_cast<double>(ncov) / probe_count : 1.0;
    lat.stats.max_overlap_quarter = maxover;
    lat.stats.probes = probe_count;

    double minsep = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < lat.count(); ++i)
        for (std::size_t j = i + 1; j < lat.count(); ++j)
            minsep = std::min(minsep,
                              beta_raw(lat.points.data() + i * n,
                                       lat.points.data() + j * n, n));
    lat.stats.min_pairwise_beta = lat.count() > 1 ? minsep : 0.0;
    return lat;
}

void save_lattice(const Lattice& lat, const std::filesystem::path& file) {
    std::ofstream os(file, std::ios::trunc);
    if (!os) throw std::runtime_error("save_lattice: cannot open file");
    char buf[40];
    auto put = [&](double x) {
        std::snprintf(buf, sizeof(buf), "%.17g", x);
        os << buf;
    };
    os << lat.n << ' ';
    put(lat.r);
    os << ' ';
    put(lat.rho_max);
    os << ' ' << lat.seed << ' ' << lat.count() << '\n';
    for (std::size_t k = 0; k < lat.count(); ++k) {
        const auto pt = lat.point(k);
        for (std::size_t j = 0; j < pt.size(); ++j) {
            if (j) os << ' ';
            put(pt[j].real());
            os << ' ';
            put(pt[j].imag());
        }
        os << '\n';
    }
}

Lattice load_lattice(const std::filesystem::path& file) {
    std::ifstream is(file);
    if (!is) throw std::runtime_error("load_lattice: cannot open file");
    Lattice lat;
    std::size_t count = 0;
    if (!(is >> lat.n >> lat.r >> lat.rho_max >> lat.seed >> count))
        throw std::runtime_error("load_lattice: bad header");
    lat.points.resize(count * lat.n);
    for (auto& z : lat.points) {
        double re, im;
        if (!(is >> re >> im)) throw std::runtime_error("load_lattice: bad point");
        z = cxd{re, im};
    }
    return lat;
}

HoloFun canonical_atom(const CVec& a, double s, int n) {
    if (!(s > -0.5 && s <= 0.5 * n))
        throw std::domain_error("canonical_atom: s must lie in (-1/2, n/2]");
    require_interior(a.span(), "canonical_atom: a");
    HoloFun f(n);
    const double pref = std::pow(1.0 - a.norm_sq(), n - s);
    f.add_atom(pref, a, static_cast<double>(n));
    return f;
}

HoloFun synthesize(std::span<const cxd> coeffs, std::span<const cxd> centers_flat,
                   int n, double b) {
    if (!(b > n)) throw std::invalid_argument("synthesize: b > n required");
    if (centers_flat.size() != coeffs.size() * static_cast<std::size_t>(n))
        throw std::invalid_argument("synthesize: coefficient/center count mismatch");
    HoloFun f(n);
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        const auto a = centers_flat.subspan(k * n, n);
        CVec av(std::vector<cxd>(a.begin(), a.end()));
        const double pref = std::pow(1.0 - norm_sq(a), b);
        f.add_atom(coeffs[k] * pref, av, b);
    }
    return f;
}

TubeSup coeff_cm(std::span<const cxd> coeffs, std::span<const cxd> centers_flat,
                 int n, double s, const SupGrid& grid, CoeffWeight flavor) {
    if (!(s > -0.5 && s < 0.5))
        throw std::domain_error("coeff_cm: s must lie in (-1/2, 1/2)");
    if (centers_flat.size() != coeffs.size() * static_cast<std::size_t>(n))
        throw std::invalid_argument("coeff_cm: coefficient/center count mismatch");
    const double w = flavor == CoeffWeight::dimension ? static_cast<double>(n)
                                                      : n - 2.0 * s;
    std::vector<double> masses(coeffs.size());
    for (std::size_t k = 0; k < coeffs.size(); ++k)
        masses[k] = std::norm(coeffs[k]) *
                    std::pow(1.0 - norm_sq(centers_flat.subspan(k * n, n)), w);
    const MeasureSpec mu = MeasureSpec::discrete(
        n, std::move(masses),
        std::vector<cxd>(centers_flat.begin(), centers_flat.end()));
    return cm_constant(mu, 1.0 - 2.0 * s / n, grid);
}

void save_atoms(const AtomList& atoms, int n, const std::filesystem::path& file) {
    std::ofstream os(file, std::ios::trunc);
    if (!os) throw std::runtime_error("save_atoms: cannot open file");
    char buf[40];
    auto put = [&](double x) {
        std::snprintf(buf, sizeof(buf), "%.17g", x);
        os << buf;
    };
    for (std::size_t k = 0; k < atoms.coeffs.size(); ++k) {
        put(atoms.coeffs[k].real());
        os << ' ';
        put(atoms.coeffs[k].imag());
        for (int j = 0; j < n; ++j) {
            const cxd a = atoms.centers[k * n + j];
            os << ' ';
            put(a.real());
            os << ' ';
            put(a.imag());
        }
        os << ' ';
        put(atoms.b);
        os << '\n';
    }
}

AtomList load_atoms(int n, const std::filesystem::path& file) {
    std::ifstream is(file);
    if (!is) throw std::runtime_error("load_atoms: cannot open file");
    AtomList out;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        double re, im;
        if (!(ls >> re >> im)) throw std::runtime_error("load_atoms: bad coefficient");
        out.coeffs.emplace_back(re, im);
        for (int j = 0; j < n; ++j) {
            double ar, ai;
            if (!(ls >> ar >> ai)) throw std::runtime_error("load_atoms: bad center");
            out.centers.emplace_back(ar, ai);
        }
        if (!(ls >> out.b)) throw std::runtime_error("load_atoms: bad exponent");
    }
    return out;
}

} // namespace holoball
