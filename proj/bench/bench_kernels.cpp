// Timings for the OpenMP kernels against the serial reference path. Both
// paths use the same fixed block partition, so their results are
// bit-identical; this target only reports wall-clock speedups.

#include <chrono>
#include <cstdio>

#include "holoball/carleson.hpp"
#include "holoball/norms.hpp"
#include "holoball/reduce.hpp"
#include "holoball/supgrid.hpp"

using namespace holoball;

namespace {

template <class F>
double time_ms(const F& fn, int reps = 3) {
    double best = 1e300;
    for (int i = 0; i < reps; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best,
                        std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
}

void row(const char* name, double serial_ms, double parallel_ms) {
    std::printf("%-28s %10.2f ms %10.2f ms %8.2fx\n", name, serial_ms, parallel_ms,
                serial_ms / parallel_ms);
}

} // namespace

int main() {
    const std::uint64_t seed = 2026;
    const int n = 2;
    const QuadRule sphere = sphere_rule(n, 4, seed);
    const QuadRule ball = ball_rule(n, 2, seed);
    const SupGrid grid = make_grid(n, 64, 8, 0.1, 1.0, 16, seed);

    CVec a(n);
    a[0] = cxd{0.8, 0.1};
    HoloFun f(n);
    f.add_atom(1.0, a, 2.0);
    f.add_poly(cxd{0.3, -0.2}, MultiIndex{2, 1});
    f.add_poly(cxd{-0.1, 0.4}, MultiIndex{0, 3});

    const SpaceParams params = SpaceParams::make(n, 0.25);

    std::printf("%-28s %13s %13s %9s\n", "kernel", "serial", "openmp", "speedup");

    double r_serial = 0, r_par = 0;
    set_parallel_enabled(false);
    const double t1s = time_ms([&] { r_serial = hardy2_norm(f, sphere); });
    set_parallel_enabled(true);
    const double t1p = time_ms([&] { r_par = hardy2_norm(f, sphere); });
    row("hardy2_norm (2^17 nodes)", t1s, t1p);
    if (r_serial != r_par) std::printf("  MISMATCH: %.17g vs %.17g\n", r_serial, r_par);

    set_parallel_enabled(false);
    const double t2s = time_ms([&] { (void)cap_profile(f, grid, sphere); });
    set_parallel_enabled(true);
    const double t2p = time_ms([&] { (void)cap_profile(f, grid, sphere); });
    row("cap_profile (64 centers)", t2s, t2p);

    const std::vector<cxd> a_flat = grid.a_samples();
    set_parallel_enabled(false);
    const double t3s = time_ms([&] { (void)mobius_profile(f, a_flat, n, sphere); });
    set_parallel_enabled(true);
    const double t3p = time_ms([&] { (void)mobius_profile(f, a_flat, n, sphere); });
    row("mobius_profile", t3s, t3p);

    set_parallel_enabled(false);
    const double t4s = time_ms([&] { (void)green_profile(f, a_flat, n, ball); });
    set_parallel_enabled(true);
    const double t4p = time_ms([&] { (void)green_profile(f, a_flat, n, ball); });
    row("green_profile", t4s, t4p);

    const MeasureSpec mu = gradient_measure(f, GradKind::grad, params);
    set_parallel_enabled(false);
    const double t5s = time_ms([&] { (void)cm_constant(mu, 0.75, grid, &ball); });
    set_parallel_enabled(true);
    const double t5p = time_ms([&] { (void)cm_constant(mu, 0.75, grid, &ball); });
    row("cm_constant (density)", t5s, t5p);

    return 0;
}
