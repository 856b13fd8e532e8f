#pragma once

#include "gaussian_ops.hpp"
#include "solver.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

namespace squeezeopt {

/// One grid point of the three-mode family at the separability threshold,
/// r = 0.1 + 0.05 j and d = r + 0.03 i.
struct SweepRow {
    int i = 0;
    int j = 0;
    double r = 0.0;
    double d = 0.0;
    double x = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    double value = 0.0;
    double prepError = 0.0;
    double cost2d = 0.0;
    SolveStatus status = SolveStatus::Converged;
};

inline SweepRow sweep_point(int i, int j, const SolveOptions& opts) {
    SweepRow row;
    row.i = i;
    row.j = j;
    row.r = 0.1 + 0.05 * j;
    row.d = row.r + 0.03 * i;
    row.x = x_sep(row.r, row.d);
    const CovarianceMatrix gamma = mista_korolkova(row.r, row.d, row.x);
    const BoundsReport b = compute_bounds(gamma);
    const SolveResult res = minimize_G(gamma, opts);
    row.lower = b.bestLower;
    row.upper = b.bestUpper;
    row.value = res.value;
    row.prepError = res.prepError;
    row.cost2d = 2.0 * row.d;
    row.status = res.status;
    return row;
}

/// Grid points i, j in {1, 1 + stride, ...} up to imax, jmax, ordered by j
/// then i. Points are solved concurrently; the result order does not depend
/// on scheduling.
inline std::vector<SweepRow> sweep_mista(int imax, int jmax, int stride, const SolveOptions& opts,
                                         unsigned threads = 0) {
    if (imax < 1 || jmax < 1 || stride < 1) throw Error("sweep grid bounds and stride must be at least 1");
    opts.validate();
    std::vector<std::pair<int, int>> grid;
    for (int j = 1; j <= jmax; j += stride)
        for (int i = 1; i <= imax; i += stride) grid.emplace_back(i, j);

    std::vector<SweepRow> rows(grid.size());
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(grid.size()));

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (std::size_t k; (k = next++) < grid.size();) {
            try {
                rows[k] = sweep_point(grid[k].first, grid[k].second, opts);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    return rows;
}

inline void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << "i,j,r,d,x_sep,lower,upper,value,prep_error,cost_2d\n";
    char buf[512];
    for (const SweepRow& r : rows) {
        std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.i, r.j, r.r, r.d,
                      r.x, r.lower, r.upper, r.value, r.prepError, r.cost2d);
        out << buf;
    }
}

}  // namespace squeezeopt
