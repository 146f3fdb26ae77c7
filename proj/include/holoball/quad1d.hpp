#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

namespace holoball {

// Adaptive Gauss-Kronrod (G7,K15) on a real interval, for real- or
// complex-valued integrands. Error per panel is |K15 - G7|.

namespace gk {

inline constexpr double kNodes[15] = {
    -0.991455371120812639206854697526329,
    -0.949107912342758524526189684047851,
    -0.864864423359769072789712788640926,
    -0.741531185599394439863864773280788,
    -0.586087235467691130294144838258730,
    -0.405845151377397166906606412076961,
    -0.207784955007898467600689403773245,
    0.0,
    0.207784955007898467600689403773245,
    0.405845151377397166906606412076961,
    0.586087235467691130294144838258730,
    0.741531185599394439863864773280788,
    0.864864423359769072789712788640926,
    0.949107912342758524526189684047851,
    0.991455371120812639206854697526329};

inline constexpr double kWeights[15] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
    0.204432940075298892414161999234649, 0.190350578064785409913256402421014,
    0.169004726639267902826583426598550, 0.140653259715525918745189590510238,
    0.104790010322250183839876322541518, 0.063092092629978553290700663189204,
    0.022935322010529224963732008058970};

// Gauss-7 weights aligned with the odd Kronrod nodes.
inline constexpr double gWeights[7] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
    0.381830050505118944950369775488975, 0.279705391489276667901467771423780,
    0.129484966168869693270611432679082};

} // namespace gk

template <class T, class F>
void gk15_panel(const F& f, double a, double b, T& k15, double& err) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    T g7{};
    k15 = T{};
    for (int i = 0; i < 15; ++i) {
        const T v = f(mid + half * gk::kNodes[i]);
        k15 += gk::kWeights[i] * v;
        if (i % 2 == 1) g7 += gk::gWeights[i / 2] * v;
    }
    k15 *= half;
    g7 *= half;
    err = std::abs(k15 - g7);
}

/// Integrates f over [a,b] by panel bisection. A panel is accepted when its
/// error estimate meets its absolute-tolerance share or falls below rel_tol
/// of the panel value (the latter keeps large-magnitude integrands from
/// demanding sub-roundoff accuracy).
template <class T, class F>
T adaptive_gk15(const F& f, double a, double b, double abs_tol, int max_depth = 24,
                double rel_tol = 1e-13) {
    struct Frame {
        double a, b, tol;
        int depth;
    };
    T total{};
    Frame stack[64];
    int top = 0;
    stack[top++] = {a, b, abs_tol, 0};
    while (top > 0) {
        const Frame fr = stack[--top];
        T val;
        double err;
        gk15_panel<T>(f, fr.a, fr.b, val, err);
        const double accept = std::max(fr.tol, rel_tol * std::abs(val));
        if (err <= accept || fr.depth >= max_depth) {
            if (fr.depth >= max_depth && err > 16.0 * accept)
                throw std::runtime_error("adaptive_gk15: tolerance not reached");
            total += val;
            continue;
        }
        const double mid = 0.5 * (fr.a + fr.b);
        if (top + 2 > 64) throw std::runtime_error("adaptive_gk15: stack overflow");
        stack[top++] = {fr.a, mid, fr.tol * 0.5, fr.depth + 1};
        stack[top++] = {mid, fr.b, fr.tol * 0.5, fr.depth + 1};
    }
    return total;
}

} // namespace holoball
