#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

// Deterministic data-parallel reductions.  Work is split into fixed-size
// blocks; each block accumulates serially in index order into its own slot,
// and the slots are combined in a final serial pass.  The floating-point
// association therefore never depends on the number of threads, so results
// are bit-identical for any thread count (including the serial reference).

namespace rpp::par {

inline constexpr std::int64_t kBlock = 1024;

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

inline void set_threads(int n) {
#ifdef _OPENMP
    if (n > 0) omp_set_num_threads(n);
#else
    (void)n;
#endif
}

// Serial reference: identical block association, no threading.
template <class F>
double block_sum_serial(std::int64_t n, F&& per_item) {
    const std::int64_t nblocks = (n + kBlock - 1) / kBlock;
    std::vector<double> partial(static_cast<std::size_t>(nblocks), 0.0);
    for (std::int64_t b = 0; b < nblocks; ++b) {
        double s = 0.0;
        const std::int64_t hi = std::min(n, (b + 1) * kBlock);
        for (std::int64_t i = b * kBlock; i < hi; ++i) s += per_item(i);
        partial[static_cast<std::size_t>(b)] = s;
    }
    double total = 0.0;
    for (double v : partial) total += v;
    return total;
}

template <class F>
double block_sum(std::int64_t n, F&& per_item) {
    const std::int64_t nblocks = (n + kBlock - 1) / kBlock;
    std::vector<double> partial(static_cast<std::size_t>(nblocks), 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::int64_t b = 0; b < nblocks; ++b) {
        double s = 0.0;
        const std::int64_t hi = std::min(n, (b + 1) * kBlock);
        for (std::int64_t i = b * kBlock; i < hi; ++i) s += per_item(i);
        partial[static_cast<std::size_t>(b)] = s;
    }
    double total = 0.0;
    for (double v : partial) total += v;
    return total;
}

// Sum and sum of squares in one sweep (for mean / standard error).
template <class F>
std::pair<double, double> block_sum2(std::int64_t n, F&& per_item) {
    const std::int64_t nblocks = (n + kBlock - 1) / kBlock;
    std::vector<double> p1(static_cast<std::size_t>(nblocks), 0.0);
    std::vector<double> p2(static_cast<std::size_t>(nblocks), 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::int64_t b = 0; b < nblocks; ++b) {
        double s = 0.0, s2 = 0.0;
        const std::int64_t hi = std::min(n, (b + 1) * kBlock);
        for (std::int64_t i = b * kBlock; i < hi; ++i) {
            const double v = per_item(i);
            s += v;
            s2 += v * v;
        }
        p1[static_cast<std::size_t>(b)] = s;
        p2[static_cast<std::size_t>(b)] = s2;
    }
    double t1 = 0.0, t2 = 0.0;
    for (std::size_t b = 0; b < p1.size(); ++b) {
        t1 += p1[b];
        t2 += p2[b];
    }
    return {t1, t2};
}

// Parallel fill: out[i] = f(i).  No reduction, trivially deterministic.
template <class F>
void block_apply(std::int64_t n, std::vector<double>& out, F&& f) {
    out.resize(static_cast<std::size_t>(n));
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::int64_t i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = f(i);
}

} // namespace rpp::par
