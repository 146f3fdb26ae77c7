#include "holoball/holofun.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

#include "holoball/gamma.hpp"

namespace holoball {

namespace {

// (1-u)^{-b}; integer b up to 16 avoids the transcendental pow on hot paths.
cxd inv_power(cxd one_minus_u, double b) {
    const int bi = static_cast<int>(std::lround(b));
    if (std::abs(b - bi) < 1e-14 && bi >= 0 && bi <= 16) {
        cxd p{1.0, 0.0};
        for (int i = 0; i < bi; ++i) p *= one_minus_u;
        return 1.0 / p;
    }
    return std::pow(one_minus_u, -b);
}

cxd monomial_value(const cxd* z, const MultiIndex& m) {
    cxd p{1.0, 0.0};
    for (std::size_t j = 0; j < m.dim(); ++j)
        for (int i = 0; i < m.m[j]; ++i) p *= z[j];
    return p;
}

} // namespace

MultiIndex::MultiIndex(std::vector<int> entries) : m(std::move(entries)) {
    for (int e : m)
        if (e < 0) throw std::invalid_argument("multi-index entries must be >= 0");
}

MultiIndex::MultiIndex(std::initializer_list<int> entries)
    : MultiIndex(std::vector<int>(entries)) {}

int MultiIndex::degree() const {
    int d = 0;
    for (int e : m) d += e;
    return d;
}

HoloFun::HoloFun(int n) : n_(n) {
    if (n < 1) throw std::invalid_argument("HoloFun: n >= 1 required");
}

HoloFun HoloFun::constant(int n, cxd c) {
    HoloFun f(n);
    if (c != cxd{0.0, 0.0}) f.add_poly(c, MultiIndex(std::vector<int>(n, 0)));
    return f;
}

HoloFun HoloFun::monomial(int n, cxd c, MultiIndex m) {
    HoloFun f(n);
    f.add_poly(c, std::move(m));
    return f;
}

HoloFun HoloFun::coordinate(int n, int k) {
    std::vector<int> m(n, 0);
    m.at(k) = 1;
    return monomial(n, 1.0, MultiIndex(std::move(m)));
}

HoloFun& HoloFun::add_poly(cxd coeff, MultiIndex m) {
    if (static_cast<int>(m.dim()) != n_)
        throw std::invalid_argument("HoloFun: multi-index dimension mismatch");
    for (int e : m.m) max_entry_ = std::max(max_entry_, e);
    poly_.push_back({coeff, std::move(m)});
    return *this;
}

HoloFun& HoloFun::add_atom(cxd coeff, const CVec& center, double exponent) {
    if (static_cast<int>(center.dim()) != n_)
        throw std::invalid_argument("HoloFun: atom center dimension mismatch");
    if (!(exponent > 0.0))
        throw std::invalid_argument("HoloFun: atom exponent must be > 0");
    if (!(center.norm() <= 1.0 - kAtomInteriorGap))
        throw std::domain_error("HoloFun: atom center must satisfy |a| <= 1 - 1e-9");
    atoms_.push_back({coeff, center, exponent});
    return *this;
}

int HoloFun::poly_degree() const {
    int d = -1;
    for (const auto& t : poly_) d = std::max(d, t.index.degree());
    return d;
}

namespace {

// Coordinate power tables for the common small case; one table row per
// coordinate up to the largest entry appearing in any index.
constexpr int kMaxTabledPower = 12;

} // namespace

cxd HoloFun::eval(std::span<const cxd> z) const {
    cxd s{0.0, 0.0};
    if (!poly_.empty()) {
        if (n_ <= 8 && max_entry_ <= kMaxTabledPower) {
            cxd pw[8][kMaxTabledPower + 1];
            for (int j = 0; j < n_; ++j) {
                pw[j][0] = cxd{1.0, 0.0};
                for (int e = 1; e <= max_entry_; ++e) pw[j][e] = pw[j][e - 1] * z[j];
            }
            for (const auto& t : poly_) {
                cxd p = t.coeff;
                for (int j = 0; j < n_; ++j) p *= pw[j][t.index.m[j]];
                s += p;
            }
        } else {
            for (const auto& t : poly_) s += t.coeff * monomial_value(z.data(), t.index);
        }
    }
    for (const auto& t : atoms_) {
        const cxd u = herm_inner_raw(z.data(), t.center.v.data(), z.size());
        s += t.coeff * inv_power(1.0 - u, t.exponent);
    }
    return s;
}

void HoloFun::derivs_raw(const cxd* z, cxd& val, cxd* grad_out, cxd& radial_out) const {
    val = cxd{0.0, 0.0};
    radial_out = cxd{0.0, 0.0};
    for (int j = 0; j < n_; ++j) grad_out[j] = cxd{0.0, 0.0};
    if (!poly_.empty() && n_ <= 8 && max_entry_ <= kMaxTabledPower) {
        cxd pw[8][kMaxTabledPower + 1];
        for (int j = 0; j < n_; ++j) {
            pw[j][0] = cxd{1.0, 0.0};
            for (int e = 1; e <= max_entry_; ++e) pw[j][e] = pw[j][e - 1] * z[j];
        }
        for (const auto& t : poly_) {
            cxd p = t.coeff;
            for (int j = 0; j < n_; ++j) p *= pw[j][t.index.m[j]];
            val += p;
            for (int j = 0; j < n_; ++j) {
                const int mj = t.index.m[j];
                if (mj == 0) continue;
                cxd d = t.coeff * static_cast<double>(mj);
                for (int q = 0; q < n_; ++q)
                    d *= pw[q][t.index.m[q] - (q == j ? 1 : 0)];
                grad_out[j] += d;
                radial_out += z[j] * d;
            }
        }
    } else {
        for (const auto& t : poly_) {
            val += t.coeff * monomial_value(z, t.index);
            const int deg = t.index.degree();
            if (deg == 0) continue;
            for (int j = 0; j < n_; ++j) {
                const int mj = t.index.m[j];
                if (mj == 0) continue;
                // d/dz_j drops one factor of z_j
                cxd p = t.coeff * static_cast<double>(mj);
                for (std::size_t q = 0; q < t.index.dim(); ++q) {
                    const int e = t.index.m[q] - (static_cast<int>(q) == j ? 1 : 0);
                    for (int i = 0; i < e; ++i) p *= z[q];
                }
                grad_out[j] += p;
                radial_out += z[j] * p;
            }
        }
    }
    for (const auto& t : atoms_) {
        const cxd u = herm_inner_raw(z, t.center.v.data(), t.center.dim());
        const cxd inv = 1.0 / (1.0 - u);
        const cxd base = inv_power(1.0 - u, t.exponent);
        val += t.coeff * base;
        // d/dz_j = coeff b conj(a_j) (1-u)^{-(b+1)}
        const cxd d = t.coeff * t.exponent * base * inv;
        for (int j = 0; j < n_; ++j) {
            const cxd g = d * std::conj(t.center[j]);
            grad_out[j] += g;
            radial_out += z[j] * g;
        }
    }
}

CVec HoloFun::grad(std::span<const cxd> z) const {
    CVec g(n_);
    cxd val, rad;
    derivs_raw(z.data(), val, g.v.data(), rad);
    return g;
}

cxd HoloFun::radial(std::span<const cxd> z) const {
    cxd val, rad;
    cxd g[8];
    if (n_ > 8) {
        CVec gg(n_);
        derivs_raw(z.data(), val, gg.v.data(), rad);
        return rad;
    }
    derivs_raw(z.data(), val, g, rad);
    return rad;
}

double HoloFun::grad_norm_sq(std::span<const cxd> z) const {
    const CVec g = grad(z);
    return g.norm_sq();
}

double HoloFun::inv_grad_sq(std::span<const cxd> z) const {
    const double zsq = norm_sq(z);
    if (!(zsq < 1.0))
        throw std::domain_error("inv_grad_sq: |z| < 1 required");
    cxd val, rad;
    cxd g[8];
    CVec gg;
    cxd* gp = g;
    if (n_ > 8) {
        gg = CVec(n_);
        gp = gg.v.data();
    }
    derivs_raw(z.data(), val, gp, rad);
    double gsq = 0.0;
    for (int j = 0; j < n_; ++j) gsq += std::norm(gp[j]);
    const double v = (1.0 - zsq) * (gsq - std::norm(rad));
    if (v < -1e-12 * std::max(1.0, gsq))
        throw std::runtime_error("inv_grad_sq: formula produced a negative value");
    return v < 0.0 ? 0.0 : v;
}

cxd HoloFun::tangential(std::span<const cxd> z, int i, int j) const {
    if (n_ < 2) throw std::domain_error("tangential: no tangential directions for n = 1");
    if (!(0 <= i && i < j && j < n_))
        throw std::invalid_argument("tangential: need 0 <= i < j < n");
    const CVec g = grad(z);
    return std::conj(z[j]) * g[i] - std::conj(z[i]) * g[j];
}

double HoloFun::tangential_sum_sq(std::span<const cxd> z) const {
    if (n_ < 2) throw std::domain_error("tangential: no tangential directions for n = 1");
    const CVec g = grad(z);
    double s = 0.0;
    for (int i = 0; i < n_; ++i)
        for (int j = i + 1; j < n_; ++j)
            s += std::norm(std::conj(z[j]) * g[i] - std::conj(z[i]) * g[j]);
    return s;
}

HoloFun HoloFun::scaled(cxd c) const {
    HoloFun out(n_);
    out.max_entry_ = max_entry_;
    for (const auto& t : poly_) out.poly_.push_back({c * t.coeff, t.index});
    for (const auto& t : atoms_) out.atoms_.push_back({c * t.coeff, t.center, t.exponent});
    return out;
}

HoloFun HoloFun::plus(const HoloFun& other) const {
    if (other.n_ != n_) throw std::invalid_argument("HoloFun::plus: dimension mismatch");
    HoloFun out = *this;
    out.max_entry_ = std::max(max_entry_, other.max_entry_);
    out.poly_.insert(out.poly_.end(), other.poly_.begin(), other.poly_.end());
    out.atoms_.insert(out.atoms_.end(), other.atoms_.begin(), other.atoms_.end());
    return out;
}

HoloFun HoloFun::compacted(double drop_tol) const {
    HoloFun out(n_);
    std::map<std::vector<int>, cxd> merged;
    for (const auto& t : poly_) merged[t.index.m] += t.coeff;
    for (const auto& [m, c] : merged)
        if (std::abs(c) > drop_tol) out.add_poly(c, MultiIndex(m));
    for (const auto& t : atoms_)
        if (std::abs(t.coeff) > drop_tol) out.atoms_.push_back(t);
    return out;
}

cxd HoloFun::taylor_coeff(const MultiIndex& m) const {
    if (static_cast<int>(m.dim()) != n_)
        throw std::invalid_argument("taylor_coeff: dimension mismatch");
    cxd c{0.0, 0.0};
    for (const auto& t : poly_)
        if (t.index == m) c += t.coeff;
    const int k = m.degree();
    for (const auto& t : atoms_) {
        // (1-u)^{-b} = sum_k scoeff(b,k) u^k and u^k expands multinomially.
        double logmult = std::lgamma(k + 1.0);
        cxd abar{1.0, 0.0};
        for (std::size_t j = 0; j < m.dim(); ++j) {
            logmult -= std::lgamma(m.m[j] + 1.0);
            for (int i = 0; i < m.m[j]; ++i) abar *= std::conj(t.center[j]);
        }
        c += t.coeff * binomial_series_coeff(t.exponent, k) * std::exp(logmult) * abar;
    }
    return c;
}

void for_each_multiindex(int n, int degree,
                         const std::function<void(const MultiIndex&)>& fn) {
    std::vector<int> m(n, 0);
    std::function<void(int, int)> rec = [&](int pos, int left) {
        if (pos == n - 1) {
            m[pos] = left;
            fn(MultiIndex(m));
            return;
        }
        for (int v = left; v >= 0; --v) {
            m[pos] = v;
            rec(pos + 1, left - v);
        }
    };
    rec(0, degree);
}

// ---- serialization ------------------------------------------------------

namespace {

std::string fmt_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

} // namespace

std::string serialize(const HoloFun& f) {
    std::ostringstream os;
    os << "holofun v1 n " << f.dim() << "\n";
    for (const auto& t : f.poly_terms()) {
        os << "poly " << fmt_g17(t.coeff.real()) << ' ' << fmt_g17(t.coeff.imag());
        for (int e : t.index.m) os << ' ' << e;
        os << "\n";
    }
    for (const auto& t : f.atom_terms()) {
        os << "atom " << fmt_g17(t.coeff.real()) << ' ' << fmt_g17(t.coeff.imag());
        for (const auto& a : t.center.v)
            os << ' ' << fmt_g17(a.real()) << ' ' << fmt_g17(a.imag());
        os << ' ' << fmt_g17(t.exponent) << "\n";
    }
    return os.str();
}

HoloFun parse_holofun(const std::string& text) {
    std::istringstream is(text);
    std::string tag, ver, nkey;
    int n = 0;
    if (!(is >> tag >> ver >> nkey >> n) || tag != "holofun" || ver != "v1" ||
        nkey != "n" || n < 1)
        throw std::runtime_error("parse_holofun: bad header");
    HoloFun f(n);
    std::string kind;
    while (is >> kind) {
        double re, im;
        if (!(is >> re >> im)) throw std::runtime_error("parse_holofun: bad coeff");
        if (kind == "poly") {
            std::vector<int> m(n);
            for (int& e : m)
                if (!(is >> e)) throw std::runtime_error("parse_holofun: bad index");
            f.add_poly(cxd{re, im}, MultiIndex(std::move(m)));
        } else if (kind == "atom") {
            CVec a(n);
            for (int j = 0; j < n; ++j) {
                double ar, ai;
                if (!(is >> ar >> ai))
                    throw std::runtime_error("parse_holofun: bad center");
                a[j] = cxd{ar, ai};
            }
            double b;
            if (!(is >> b)) throw std::runtime_error("parse_holofun: bad exponent");
            f.add_atom(cxd{re, im}, a, b);
        } else {
            throw std::runtime_error("parse_holofun: unknown term kind '" + kind + "'");
        }
    }
    return f;
}

} // namespace holoball
