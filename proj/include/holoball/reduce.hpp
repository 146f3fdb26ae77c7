#pragma once

#include <complex>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace holoball {

// Deterministic reductions. The node range is cut into fixed-size blocks
// (independent of the thread count); each block is summed with compensated
// accumulation, and the block partials are combined serially in index order.
// The result is therefore bit-identical whether the blocks run on one thread
// or many, and identical between the serial and OpenMP paths.

inline constexpr std::size_t kReduceBlock = 4096;

/// Process-wide switch between the OpenMP kernels and the serial reference
/// path. Both produce bit-identical values; the switch exists for testing
/// and benchmarking.
bool parallel_enabled();
void set_parallel_enabled(bool on);

template <class T>
struct Kahan {
    T sum{};
    T comp{};
    void add(const T& x) {
        const T y = x - comp;
        const T t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
};

namespace detail {

template <class T, class F>
inline T sum_block(std::size_t lo, std::size_t hi, const F& f) {
    Kahan<T> acc;
    for (std::size_t i = lo; i < hi; ++i) acc.add(f(i));
    return acc.sum;
}

} // namespace detail

/// sum_{i<count} f(i) with fixed-block compensated reduction.
template <class T, class F>
T block_sum(std::size_t count, const F& f) {
    if (count == 0) return T{};
    const std::size_t nblocks = (count + kReduceBlock - 1) / kReduceBlock;
    if (nblocks == 1) return detail::sum_block<T>(0, count, f);
    std::vector<T> partial(nblocks);
#ifdef _OPENMP
    if (parallel_enabled()) {
#pragma omp parallel for schedule(static)
        for (long long b = 0; b < static_cast<long long>(nblocks); ++b) {
            const std::size_t lo = static_cast<std::size_t>(b) * kReduceBlock;
            const std::size_t hi = std::min(lo + kReduceBlock, count);
            partial[static_cast<std::size_t>(b)] = detail::sum_block<T>(lo, hi, f);
        }
    } else
#endif
    {
        for (std::size_t b = 0; b < nblocks; ++b) {
            const std::size_t lo = b * kReduceBlock;
            const std::size_t hi = std::min(lo + kReduceBlock, count);
            partial[b] = detail::sum_block<T>(lo, hi, f);
        }
    }
    Kahan<T> total;
    for (const T& p : partial) total.add(p);
    return total.sum;
}

/// max_{i<count} f(i) with the index of the first maximizer.
/// Ties resolve to the smallest index regardless of partitioning.
template <class F>
std::pair<double, std::size_t> block_max(std::size_t count, const F& f) {
    if (count == 0) return {-std::numeric_limits<double>::infinity(), 0};
    const std::size_t nblocks = (count + kReduceBlock - 1) / kReduceBlock;
    std::vector<std::pair<double, std::size_t>> partial(nblocks);
    auto scan = [&](std::size_t b) {
        const std::size_t lo = b * kReduceBlock;
        const std::size_t hi = std::min(lo + kReduceBlock, count);
        double best = -std::numeric_limits<double>::infinity();
        std::size_t arg = lo;
        for (std::size_t i = lo; i < hi; ++i) {
            const double v = f(i);
            if (v > best) {
                best = v;
                arg = i;
            }
        }
        partial[b] = {best, arg};
    };
#ifdef _OPENMP
    if (parallel_enabled() && nblocks > 1) {
#pragma omp parallel for schedule(static)
        for (long long b = 0; b < static_cast<long long>(nblocks); ++b)
            scan(static_cast<std::size_t>(b));
    } else
#endif
    {
        for (std::size_t b = 0; b < nblocks; ++b) scan(b);
    }
    std::pair<double, std::size_t> best = partial[0];
    for (std::size_t b = 1; b < nblocks; ++b)
        if (partial[b].first > best.first) best = partial[b];
    return best;
}

/// Plain parallel loop over independent work items (no reduction).
template <class F>
void parallel_for(std::size_t count, const F& f) {
#ifdef _OPENMP
    if (parallel_enabled() && count > 1) {
#pragma omp parallel for schedule(static)
        for (long long i = 0; i < static_cast<long long>(count); ++i)
            f(static_cast<std::size_t>(i));
        return;
    }
#endif
    for (std::size_t i = 0; i < count; ++i) f(i);
}

} // namespace holoball
