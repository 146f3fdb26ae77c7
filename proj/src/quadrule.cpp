#include "holoball/quadrule.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "holoball/gamma.hpp"
#include "holoball/rng.hpp"

namespace holoball {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Jacobi polynomial P_k^{(a,b)}(x) and derivative via the three-term
// recurrence; used for Gauss-Jacobi nodes on [-1,1].
double jacobi_eval(int k, double a, double b, double x, double* dp = nullptr) {
    double p0 = 1.0, p1 = 0.5 * (a + b + 2.0) * x + 0.5 * (a - b);
    if (k == 0) {
        if (dp) *dp = 0.0;
        return p0;
    }
    for (int m = 2; m <= k; ++m) {
        const double c1 = 2.0 * m * (m + a + b) * (2.0 * m + a + b - 2.0);
        const double c2 = (2.0 * m + a + b - 1.0) * (a * a - b * b);
        const double c3 = (2.0 * m + a + b - 1.0) * (2.0 * m + a + b) *
                          (2.0 * m + a + b - 2.0);
        const double c4 = 2.0 * (m + a - 1.0) * (m + b - 1.0) * (2.0 * m + a + b);
        const double p2 = ((c2 + c3 * x) * p1 - c4 * p0) / c1;
        p0 = p1;
        p1 = p2;
    }
    if (dp) {
        // P_k' = ((k+a+b+1)/2) P_{k-1}^{(a+1,b+1)}
        *dp = 0.5 * (k + a + b + 1.0) * jacobi_eval(k - 1, a + 1.0, b + 1.0, x);
    }
    return p1;
}

// Roots by sign-change bracketing on a Chebyshev-clustered grid (the roots
// accumulate at the endpoints the same way) followed by Newton polish.
void jacobi_roots(int k, double a, double b, std::vector<double>& roots) {
    roots.clear();
    const int samples = std::max(256, 16 * k);
    double xprev = -1.0;
    double fprev = jacobi_eval(k, a, b, xprev);
    for (int i = 1; i <= samples; ++i) {
        const double x = -std::cos(std::numbers::pi * i / samples);
        const double fx = jacobi_eval(k, a, b, x);
        if (fprev == 0.0) roots.push_back(xprev);
        if (fprev * fx < 0.0) {
            double lo = xprev, hi = x, flo = fprev;
            for (int it = 0; it < 80; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double fm = jacobi_eval(k, a, b, mid);
                if (flo * fm <= 0.0)
                    hi = mid;
                else {
                    lo = mid;
                    flo = fm;
                }
            }
            double r = 0.5 * (lo + hi);
            for (int it = 0; it < 4; ++it) {
                double d;
                const double f = jacobi_eval(k, a, b, r, &d);
                if (d == 0.0) break;
                const double step = f / d;
                if (std::abs(step) > 1e-2) break;
                r -= step;
            }
            roots.push_back(r);
        }
        xprev = x;
        fprev = fx;
    }
    if (static_cast<int>(roots.size()) != k)
        throw std::runtime_error("gauss_jacobi: root bracketing failed");
}

void halton_point(std::uint64_t index, int dims, const double* shift, double* out) {
    for (int d = 0; d < dims; ++d) {
        double u = radical_inverse(index, kHaltonPrimes[d]) + shift[d];
        u -= std::floor(u);
        out[d] = u;
    }
}

// Direction on S_n from 2n uniforms via Box-Muller + normalization.
void uniforms_to_direction(const double* u, int n, cxd* out) {
    double g[16];
    for (int j = 0; j < n; ++j) {
        const double u1 = std::max(u[2 * j], 0x1.0p-64);
        box_muller(u1, u[2 * j + 1], g[2 * j], g[2 * j + 1]);
    }
    double nrm = 0.0;
    for (int j = 0; j < 2 * n; ++j) nrm += g[j] * g[j];
    nrm = std::sqrt(nrm);
    if (nrm == 0.0) nrm = 1.0;
    for (int j = 0; j < n; ++j) out[j] = cxd{g[2 * j] / nrm, g[2 * j + 1] / nrm};
}

std::size_t mc_count(int level) { return std::size_t{1} << (13 + level); }

// Fills count directions; quasi_mc uses kErrorBatches shifted Halton streams
// laid out contiguously so batch b occupies [b*count/16, (b+1)*count/16).
void fill_directions(int n, std::size_t count, std::uint64_t seed, RuleKind kind,
                     std::vector<cxd>& nodes, std::size_t stride_offset = 0) {
    if (n > 8) throw std::invalid_argument("rules support n <= 8");
    Xoshiro256ss rng(seed);
    if (kind == RuleKind::monte_carlo) {
        double u[16];
        for (std::size_t i = 0; i < count; ++i) {
            for (int d = 0; d < 2 * n; ++d) u[d] = rng.uniform_pos();
            uniforms_to_direction(u, n, nodes.data() + stride_offset + i * n);
        }
        return;
    }
    const std::size_t per = count / kErrorBatches;
    if (per * kErrorBatches != count)
        throw std::invalid_argument("quasi_mc count must be divisible by 16");
    double shift[16], u[16];
    for (int b = 0; b < kErrorBatches; ++b) {
        for (int d = 0; d < 2 * n; ++d) shift[d] = rng.uniform();
        for (std::size_t i = 0; i < per; ++i) {
            halton_point(i + 1, 2 * n, shift, u);
            uniforms_to_direction(u, n,
                                  nodes.data() + stride_offset + (b * per + i) * n);
        }
    }
}

} // namespace

double QuadRule::weight_sum() const {
    double s = 0.0, c = 0.0;
    for (double w : weights) {
        const double y = w - c;
        const double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    return s;
}

void QuadRule::validate() const {
    if (nodes.size() != weights.size() * static_cast<std::size_t>(n))
        throw std::runtime_error("rule: node/weight size mismatch");
    for (double w : weights)
        if (!(w > 0.0)) throw std::runtime_error("rule: weights must be positive");
    const double target = radial_power == 0.0
                              ? 1.0
                              : n * std::exp(std::lgamma(static_cast<double>(n)) +
                                             std::lgamma(radial_power + 1.0) -
                                             std::lgamma(n + radial_power + 1.0));
    if (std::abs(weight_sum() - target) > 1e-12 * std::max(1.0, target))
        throw std::runtime_error("rule: weight sum off by more than 1e-12");
    for (std::size_t i = 0; i < count(); ++i) {
        const double r = std::sqrt(norm_sq(node(i)));
        if (domain == Domain::sphere) {
            if (std::abs(r - 1.0) > kBoundaryTol)
                throw std::runtime_error("rule: sphere node off the sphere");
        } else if (!(r < 1.0)) {
            throw std::runtime_error("rule: ball node not interior");
        }
    }
}

void gauss_jacobi01(int npts, double alpha, double beta, std::vector<double>& u,
                    std::vector<double>& w) {
    if (npts < 1) throw std::invalid_argument("gauss_jacobi: npts >= 1 required");
    if (alpha <= -1.0 || beta <= -1.0)
        throw std::invalid_argument("gauss_jacobi: exponents must exceed -1");
    std::vector<double> x;
    jacobi_roots(npts, alpha, beta, x);
    u.resize(npts);
    w.resize(npts);
    // Gauss-Jacobi weights on [-1,1] carry a 2^{alpha+beta+1} factor that the
    // affine map to [0,1] cancels exactly, leaving
    //   w_i = Gamma(N+a+1)Gamma(N+b+1) / (N! Gamma(N+a+b+1) (1-x_i^2) P_N'(x_i)^2).
    const double logc = std::lgamma(npts + alpha + 1.0) +
                        std::lgamma(npts + beta + 1.0) - std::lgamma(npts + 1.0) -
                        std::lgamma(npts + alpha + beta + 1.0);
    for (int i = 0; i < npts; ++i) {
        double dp;
        jacobi_eval(npts, alpha, beta, x[i], &dp);
        u[i] = 0.5 * (1.0 + x[i]);
        w[i] = std::exp(logc) / ((1.0 - x[i] * x[i]) * dp * dp);
    }
}

QuadRule sphere_rule(int n, int level, std::uint64_t seed, RuleKind kind) {
    if (n < 1) throw std::invalid_argument("sphere_rule: n >= 1");
    if (level < 1) throw std::invalid_argument("sphere_rule: level >= 1");
    QuadRule rule;
    rule.domain = Domain::sphere;
    rule.n = n;
    rule.level = level;
    rule.seed = seed;

    if (n == 1) {
        rule.kind = RuleKind::tensor;
        const std::size_t N = std::size_t{64} << (level - 1);
        rule.nodes.resize(N);
        rule.weights.assign(N, 1.0 / static_cast<double>(N));
        for (std::size_t j = 0; j < N; ++j) {
            const double th = kTwoPi * static_cast<double>(j) / static_cast<double>(N);
            rule.nodes[j] = cxd{std::cos(th), std::sin(th)};
        }
        rule.est_error = 1e-15;
        return rule;
    }

    rule.kind = kind == RuleKind::tensor ? RuleKind::quasi_mc : kind;
    const std::size_t N = mc_count(level);
    rule.nodes.resize(N * n);
    rule.weights.assign(N, 1.0 / static_cast<double>(N));
    fill_directions(n, N, stream_seed(seed, "sphere"), rule.kind, rule.nodes);
    // Rough scale estimate from batch spread of a smooth probe (|z_1|^2).
    double means[kErrorBatches] = {};
    const std::size_t per = N / kErrorBatches;
    for (int b = 0; b < kErrorBatches; ++b) {
        for (std::size_t i = 0; i < per; ++i)
            means[b] += std::norm(rule.nodes[(b * per + i) * n]);
        means[b] /= static_cast<double>(per);
    }
    double m = 0.0, v = 0.0;
    for (double x : means) m += x;
    m /= kErrorBatches;
    for (double x : means) v += (x - m) * (x - m);
    rule.est_error = std::sqrt(v / (kErrorBatches - 1.0) / kErrorBatches);
    return rule;
}

QuadRule ball_rule(int n, int level, std::uint64_t seed, RuleKind kind) {
    if (n < 1) throw std::invalid_argument("ball_rule: n >= 1");
    if (level < 1) throw std::invalid_argument("ball_rule: level >= 1");
    QuadRule rule;
    rule.domain = Domain::ball;
    rule.n = n;
    rule.level = level;
    rule.seed = seed;

    if (n == 1) {
        // Tensor: Gauss-Jacobi in u = r^2 (plain Legendre weight) times the
        // trapezoid rule in angle.
        rule.kind = RuleKind::tensor;
        const int nr = 16 * level;
        const std::size_t nth = std::size_t{64} << (level - 1);
        std::vector<double> u, wu;
        gauss_jacobi01(nr, 0.0, 0.0, u, wu);
        rule.nodes.reserve(nr * nth);
        rule.weights.reserve(nr * nth);
        for (int i = 0; i < nr; ++i) {
            const double r = std::sqrt(u[i]);
            for (std::size_t j = 0; j < nth; ++j) {
                const double th =
                    kTwoPi * static_cast<double>(j) / static_cast<double>(nth);
                rule.nodes.push_back(r * cxd{std::cos(th), std::sin(th)});
                rule.weights.push_back(wu[i] / static_cast<double>(nth));
            }
        }
        rule.est_error = 1e-15;
        return rule;
    }

    rule.kind = kind == RuleKind::tensor ? RuleKind::quasi_mc : kind;
    const std::size_t N = mc_count(level);
    rule.nodes.resize(N * n);
    rule.weights.assign(N, 1.0 / static_cast<double>(N));
    // Direction times independent radius with P(|z| <= r) = r^{2n}.
    fill_directions(n, N, stream_seed(seed, "ball_dir"), rule.kind, rule.nodes);
    Xoshiro256ss rng(stream_seed(seed, "ball_rad"));
    if (rule.kind == RuleKind::monte_carlo) {
        for (std::size_t i = 0; i < N; ++i) {
            const double r = std::pow(rng.uniform_pos(), 1.0 / (2.0 * n));
            for (int d = 0; d < n; ++d) rule.nodes[i * n + d] *= r;
        }
    } else {
        const std::size_t per = N / kErrorBatches;
        const std::uint32_t base = kHaltonPrimes[2 * n]; // unused by directions
        for (int b = 0; b < kErrorBatches; ++b) {
            const double shift = rng.uniform();
            for (std::size_t i = 0; i < per; ++i) {
                double v = radical_inverse(i + 1, base) + shift;
                v -= std::floor(v);
                const double r =
                    std::pow(std::max(v, 0x1.0p-64), 1.0 / (2.0 * n));
                for (int d = 0; d < n; ++d) rule.nodes[(b * per + i) * n + d] *= r;
            }
        }
    }
    double means[kErrorBatches] = {};
    const std::size_t per = N / kErrorBatches;
    for (int b = 0; b < kErrorBatches; ++b) {
        for (std::size_t i = 0; i < per; ++i)
            means[b] += 1.0 - norm_sq(rule.node(b * per + i));
        means[b] /= static_cast<double>(per);
    }
    double m = 0.0, v = 0.0;
    for (double x : means) m += x;
    m /= kErrorBatches;
    for (double x : means) v += (x - m) * (x - m);
    rule.est_error = std::sqrt(v / (kErrorBatches - 1.0) / kErrorBatches);
    return rule;
}

QuadRule power_ball_rule_custom(int n, double c, int n_radial, std::size_t n_dir,
                                std::uint64_t seed) {
    if (c <= -1.0)
        throw std::invalid_argument("power_ball_rule: exponent must exceed -1");
    QuadRule rule;
    rule.domain = Domain::ball;
    rule.n = n;
    rule.level = 1;
    rule.seed = seed;
    rule.kind = RuleKind::tensor;
    rule.radial_power = c;
    std::vector<double> u, wu;
    // int_0^1 h(u) u^{n-1} (1-u)^c du, scaled by n for the nu radial factor.
    gauss_jacobi01(n_radial, c, static_cast<double>(n - 1), u, wu);
    if (n == 1) {
        for (int i = 0; i < n_radial; ++i) {
            const double r = std::sqrt(u[i]);
            for (std::size_t j = 0; j < n_dir; ++j) {
                const double th =
                    kTwoPi * static_cast<double>(j) / static_cast<double>(n_dir);
                rule.nodes.push_back(r * cxd{std::cos(th), std::sin(th)});
                rule.weights.push_back(wu[i] / static_cast<double>(n_dir));
            }
        }
        rule.est_error = 1e-14;
        return rule;
    }
    std::vector<cxd> dirs(n_dir * n);
    fill_directions(n, n_dir, stream_seed(seed, "power_dir"), RuleKind::quasi_mc, dirs);
    rule.nodes.reserve(n_radial * n_dir * n);
    rule.weights.reserve(n_radial * n_dir);
    for (int i = 0; i < n_radial; ++i) {
        const double r = std::sqrt(u[i]);
        const double w = n * wu[i] / static_cast<double>(n_dir);
        for (std::size_t j = 0; j < n_dir; ++j) {
            for (int d = 0; d < n; ++d) rule.nodes.push_back(r * dirs[j * n + d]);
            rule.weights.push_back(w);
        }
    }
    rule.est_error = 1e-8;
    return rule;
}

QuadRule power_ball_rule(int n, double c, int level, std::uint64_t seed) {
    const std::size_t ndir = n == 1 ? (std::size_t{64} << (level - 1))
                                    : (std::size_t{1} << (9 + level));
    return power_ball_rule_custom(n, c, 24 * level, ndir, seed);
}

namespace {

constexpr std::uint32_t kCacheMagic = 0x4c555251; // "QRUL" little-endian
constexpr std::uint32_t kCacheVersion = 1;

template <class T>
void put(std::ofstream& os, T v) {
    static_assert(std::is_trivially_copyable_v<T>);
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::ifstream& is) {
    T v;
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw std::runtime_error("rule cache: truncated file");
    return v;
}

} // namespace

void save_rule(const QuadRule& rule, const std::filesystem::path& file) {
    if (std::endian::native != std::endian::little)
        throw std::runtime_error("rule cache: little-endian layout only");
    std::ofstream os(file, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("rule cache: cannot open for writing");
    put<std::uint32_t>(os, kCacheMagic);
    put<std::uint32_t>(os, kCacheVersion);
    put<std::uint8_t>(os, static_cast<std::uint8_t>(rule.domain));
    put<std::uint8_t>(os, static_cast<std::uint8_t>(rule.kind));
    put<std::uint16_t>(os, 0);
    put<std::uint32_t>(os, static_cast<std::uint32_t>(rule.n));
    put<std::uint32_t>(os, static_cast<std::uint32_t>(rule.level));
    put<std::uint64_t>(os, rule.seed);
    put<double>(os, rule.radial_power);
    put<double>(os, rule.est_error);
    put<std::uint64_t>(os, static_cast<std::uint64_t>(rule.count()));
    os.write(reinterpret_cast<const char*>(rule.nodes.data()),
             static_cast<std::streamsize>(rule.nodes.size() * sizeof(cxd)));
    os.write(reinterpret_cast<const char*>(rule.weights.data()),
             static_cast<std::streamsize>(rule.weights.size() * sizeof(double)));
    if (!os) throw std::runtime_error("rule cache: write failed");
}

QuadRule load_rule(const std::filesystem::path& file) {
    std::ifstream is(file, std::ios::binary);
    if (!is) throw std::runtime_error("rule cache: cannot open for reading");
    if (get<std::uint32_t>(is) != kCacheMagic)
        throw std::runtime_error("rule cache: bad magic");
    if (get<std::uint32_t>(is) != kCacheVersion)
        throw std::runtime_error("rule cache: unsupported version");
    QuadRule rule;
    rule.domain = static_cast<Domain>(get<std::uint8_t>(is));
    rule.kind = static_cast<RuleKind>(get<std::uint8_t>(is));
    get<std::uint16_t>(is);
    rule.n = static_cast<int>(get<std::uint32_t>(is));
    rule.level = static_cast<int>(get<std::uint32_t>(is));
    rule.seed = get<std::uint64_t>(is);
    rule.radial_power = get<double>(is);
    rule.est_error = get<double>(is);
    const auto count = get<std::uint64_t>(is);
    rule.nodes.resize(count * static_cast<std::uint64_t>(rule.n));
    rule.weights.resize(count);
    is.read(reinterpret_cast<char*>(rule.nodes.data()),
            static_cast<std::streamsize>(rule.nodes.size() * sizeof(cxd)));
    is.read(reinterpret_cast<char*>(rule.weights.data()),
            static_cast<std::streamsize>(rule.weights.size() * sizeof(double)));
    if (!is) throw std::runtime_error("rule cache: truncated payload");
    return rule;
}

std::string rule_cache_name(Domain d, int n, int level, RuleKind kind,
                            std::uint64_t seed) {
    const char* dom = d == Domain::sphere ? "sphere" : "ball";
    const char* kd = kind == RuleKind::tensor ? "tensor"
                     : kind == RuleKind::monte_carlo ? "mc"
                                                     : "qmc";
    return std::string(dom) + "_n" + std::to_string(n) + "_l" + std::to_string(level) +
           "_" + kd + "_s" + std::to_string(seed) + ".qrule";
}

double sphere_monomial_sq_integral(std::span<const int> m) {
    const int n = static_cast<int>(m.size());
    int total = 0;
    double logfac = 0.0;
    for (int mi : m) {
        total += mi;
        logfac += std::lgamma(mi + 1.0);
    }
    return std::exp(std::lgamma(static_cast<double>(n)) + logfac -
                    std::lgamma(static_cast<double>(n + total)));
}

double ball_monomial_sq_integral(std::span<const int> m) {
    const int n = static_cast<int>(m.size());
    int total = 0;
    double logfac = 0.0;
    for (int mi : m) {
        total += mi;
        logfac += std::lgamma(mi + 1.0);
    }
    return std::exp(std::lgamma(n + 1.0) + logfac -
                    std::lgamma(static_cast<double>(n + 1 + total)));
}

} // namespace holoball
