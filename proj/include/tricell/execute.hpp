#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "tricell/cell_grid.hpp"
#include "tricell/phase_space.hpp"
#include "tricell/potentials.hpp"
#include "tricell/schedule.hpp"

#if defined(__GNUC__) || defined(__clang__)
#define TRICELL_NOINLINE __attribute__((noinline))
#else
#define TRICELL_NOINLINE
#endif

namespace tricell {

#ifndef _OPENMP
inline int omp_get_max_threads() { return 1; }
inline int omp_get_thread_num() { return 0; }
#endif

struct TripletCounters {
    std::uint64_t triplets_traversed = 0;
    std::uint64_t triplets_accepted = 0;
    std::uint64_t pairs_traversed = 0;
    std::uint64_t pairs_accepted = 0;
};

// Percentage of distance-evaluated candidates that passed the cutoff.
inline double hitrate(const TripletCounters& c) {
    if (c.triplets_traversed == 0)
        throw std::domain_error("hitrate: no traversed triplets");
    return 100.0 * static_cast<double>(c.triplets_accepted) /
           static_cast<double>(c.triplets_traversed);
}

struct ExecResult {
    double E2 = 0.0, E3 = 0.0, W2 = 0.0, W3 = 0.0;
    TripletCounters counters;
    double seconds_pair = 0.0;
    double seconds_triple = 0.0;
};

struct ExecOptions {
    bool run_triplets = true;
    // Test hook: collect accepted particle triplets (sorted ids). Forces
    // serial execution.
    std::vector<std::array<int, 3>>* record_accepted = nullptr;
};

namespace detail {

// Candidate enumerators for the three routines. Ranges are index intervals
// into one flat coordinate array; the functor receives (i, j, k) with (i, j)
// the routine's pair and k the extension particle.
template <class F>
inline void for_triples_one_cell(int b0, int b1, F&& f) {
    for (int i = b0; i < b1; ++i)
        for (int j = i + 1; j < b1; ++j)
            for (int k = j + 1; k < b1; ++k) f(i, j, k);
}

template <class F>
inline void for_triples_two_cell(int a0, int a1, int b0, int b1, F&& f) {
    for (int i = a0; i < a1; ++i)
        for (int j = i + 1; j < a1; ++j)
            for (int k = b0; k < b1; ++k) f(i, j, k);
    for (int i = b0; i < b1; ++i)
        for (int j = i + 1; j < b1; ++j)
            for (int k = a0; k < a1; ++k) f(i, j, k);
}

template <class F>
inline void for_triples_three_cell(int a0, int a1, int b0, int b1, int c0, int c1, F&& f) {
    for (int i = a0; i < a1; ++i)
        for (int j = b0; j < b1; ++j)
            for (int k = c0; k < c1; ++k) f(i, j, k);
}

inline std::uint64_t count_one_cell(std::uint64_t n) { return n * (n - 1) * (n - 2) / 6; }
inline std::uint64_t count_two_cell(std::uint64_t na, std::uint64_t nb) {
    return nb * (na * (na - 1) / 2) + na * (nb * (nb - 1) / 2);
}
inline std::uint64_t count_three_cell(std::uint64_t na, std::uint64_t nb, std::uint64_t nc) {
    return na * nb * nc;
}

// Candidate scans. Each walks one routine's enumeration, applies the cutoff
// predicate to squared distances, and appends accepted (i, j, k) index
// triples to `out`, returning the appended count. They touch only the
// restrict-qualified arrays, so the pair invariants stay in registers across
// the innermost loop.
TRICELL_NOINLINE inline int scan_one_cell(const double* __restrict x,
                                          const double* __restrict y,
                                          const double* __restrict z, int b0, int b1,
                                          double rc2, double rc6, bool product,
                                          int* __restrict out) {
    int n = 0;
    for (int i = b0; i < b1; ++i) {
        const double xi = x[i], yi = y[i], zi = z[i];
        for (int j = i + 1; j < b1; ++j) {
            const double xj = x[j], yj = y[j], zj = z[j];
            const double dxij = xi - xj, dyij = yi - yj, dzij = zi - zj;
            const double r2ij = dxij * dxij + dyij * dyij + dzij * dzij;
            for (int k = j + 1; k < b1; ++k) {
                const double dxik = xi - x[k], dyik = yi - y[k], dzik = zi - z[k];
                const double dxjk = xj - x[k], dyjk = yj - y[k], dzjk = zj - z[k];
                const double r2ik = dxik * dxik + dyik * dyik + dzik * dzik;
                const double r2jk = dxjk * dxjk + dyjk * dyjk + dzjk * dzjk;
                const bool ok = product
                                    ? r2ij * r2ik * r2jk <= rc6
                                    : std::max(r2ij, std::max(r2ik, r2jk)) <= rc2;
                if (ok) {
                    out[n] = i; out[n + 1] = j; out[n + 2] = k;
                    n += 3;
                }
            }
        }
    }
    return n;
}

// One 2+1 split of a cell pair: a packed list of intra-cell (i, j) bonds
// crossed with the extension range. The linear bond iteration avoids the
// triangular-loop exits that dominate the naive form.
TRICELL_NOINLINE inline int scan_pairs_ext(const double* __restrict x,
                                           const double* __restrict y,
                                           const double* __restrict z,
                                           const int* __restrict bonds, int nb2, int e0,
                                           int e1, double rc2, double rc6, bool product,
                                           int* __restrict out) {
    int n = 0;
    for (int p = 0; p < nb2; p += 2) {
        const int i = bonds[p], j = bonds[p + 1];
        const double xi = x[i], yi = y[i], zi = z[i];
        const double xj = x[j], yj = y[j], zj = z[j];
        const double dxij = xi - xj, dyij = yi - yj, dzij = zi - zj;
        const double r2ij = dxij * dxij + dyij * dyij + dzij * dzij;
        for (int k = e0; k < e1; ++k) {
            const double dxik = xi - x[k], dyik = yi - y[k], dzik = zi - z[k];
            const double dxjk = xj - x[k], dyjk = yj - y[k], dzjk = zj - z[k];
            const double r2ik = dxik * dxik + dyik * dyik + dzik * dzik;
            const double r2jk = dxjk * dxjk + dyjk * dyjk + dzjk * dzjk;
            const bool ok = product ? r2ij * r2ik * r2jk <= rc6
                                    : std::max(r2ij, std::max(r2ik, r2jk)) <= rc2;
            out[n] = i; out[n + 1] = j; out[n + 2] = k;
            n += ok ? 3 : 0;
        }
    }
    return n;
}

TRICELL_NOINLINE inline int scan_three_cell(const double* __restrict x,
                                            const double* __restrict y,
                                            const double* __restrict z, int a0, int a1,
                                            int b0, int b1, int c0, int c1, double rc2,
                                            double rc6, bool product, int* __restrict out) {
    int n = 0;
    for (int i = a0; i < a1; ++i) {
        const double xi = x[i], yi = y[i], zi = z[i];
        for (int j = b0; j < b1; ++j) {
            const double xj = x[j], yj = y[j], zj = z[j];
            const double dxij = xi - xj, dyij = yi - yj, dzij = zi - zj;
            const double r2ij = dxij * dxij + dyij * dyij + dzij * dzij;
            for (int k = c0; k < c1; ++k) {
                const double dxik = xi - x[k], dyik = yi - y[k], dzik = zi - z[k];
                const double dxjk = xj - x[k], dyjk = yj - y[k], dzjk = zj - z[k];
                const double r2ik = dxik * dxik + dyik * dyik + dzik * dzik;
                const double r2jk = dxjk * dxjk + dyjk * dyjk + dzjk * dzjk;
                const bool ok = product ? r2ij * r2ik * r2jk <= rc6
                                        : (r2ij <= rc2 && r2ik <= rc2 && r2jk <= rc2);
                if (ok) {
                    out[n] = i; out[n + 1] = j; out[n + 2] = k;
                    n += 3;
                }
            }
        }
    }
    return n;
}

// Non-Newton target scans: i is the force target in the base range.
TRICELL_NOINLINE inline int scan_target_internal(const double* __restrict x,
                                                 const double* __restrict y,
                                                 const double* __restrict z, int b0, int b1,
                                                 double rc2, double rc6, bool product,
                                                 int* __restrict out) {
    int n = 0;
    for (int i = b0; i < b1; ++i) {
        const double xi = x[i], yi = y[i], zi = z[i];
        for (int j = b0; j < b1; ++j) {
            if (j == i) continue;
            const double xj = x[j], yj = y[j], zj = z[j];
            const double dxij = xi - xj, dyij = yi - yj, dzij = zi - zj;
            const double r2ij = dxij * dxij + dyij * dyij + dzij * dzij;
            for (int k = j + 1; k < b1; ++k) {
                if (k == i) continue;
                const double dxik = xi - x[k], dyik = yi - y[k], dzik = zi - z[k];
                const double dxjk = xj - x[k], dyjk = yj - y[k], dzjk = zj - z[k];
                const double r2ik = dxik * dxik + dyik * dyik + dzik * dzik;
                const double r2jk = dxjk * dxjk + dyjk * dyjk + dzjk * dzjk;
                const bool ok = product
                                    ? r2ij * r2ik * r2jk <= rc6
                                    : std::max(r2ij, std::max(r2ik, r2jk)) <= rc2;
                if (ok) {
                    out[n] = i; out[n + 1] = j; out[n + 2] = k;
                    n += 3;
                }
            }
        }
    }
    return n;
}

TRICELL_NOINLINE inline int scan_target_base_ext(const double* __restrict x,
                                                 const double* __restrict y,
                                                 const double* __restrict z, int b0, int b1,
                                                 int c0, int c1, double rc2, double rc6,
                                                 bool product, int* __restrict out) {
    int n = 0;
    for (int i = b0; i < b1; ++i) {
        const double xi = x[i], yi = y[i], zi = z[i];
        for (int j = b0; j < b1; ++j) {
            if (j == i) continue;
            const double xj = x[j], yj = y[j], zj = z[j];
            const double dxij = xi - xj, dyij = yi - yj, dzij = zi - zj;
            const double r2ij = dxij * dxij + dyij * dyij + dzij * dzij;
            for (int k = c0; k < c1; ++k) {
                const double dxik = xi - x[k], dyik = yi - y[k], dzik = zi - z[k];
                const double dxjk = xj - x[k], dyjk = yj - y[k], dzjk = zj - z[k];
                const double r2ik = dxik * dxik + dyik * dyik + dzik * dzik;
                const double r2jk = dxjk * dxjk + dyjk * dyjk + dzjk * dzjk;
                const bool ok = product
                                    ? r2ij * r2ik * r2jk <= rc6
                                    : std::max(r2ij, std::max(r2ik, r2jk)) <= rc2;
                if (ok) {
                    out[n] = i; out[n + 1] = j; out[n + 2] = k;
                    n += 3;
                }
            }
        }
    }
    return n;
}

TRICELL_NOINLINE inline int scan_target_pair_ext(const double* __restrict x,
                                                 const double* __restrict y,
                                                 const double* __restrict z, int b0, int b1,
                                                 int s0, int s1, double rc2, double rc6,
                                                 bool product, int* __restrict out) {
    int n = 0;
    for (int i = b0; i < b1; ++i) {
        const double xi = x[i], yi = y[i], zi = z[i];
        for (int j = s0; j < s1; ++j) {
            const double xj = x[j], yj = y[j], zj = z[j];
            const double dxij = xi - xj, dyij = yi - yj, dzij = zi - zj;
            const double r2ij = dxij * dxij + dyij * dyij + dzij * dzij;
            for (int k = j + 1; k < s1; ++k) {
                const double dxik = xi - x[k], dyik = yi - y[k], dzik = zi - z[k];
                const double dxjk = xj - x[k], dyjk = yj - y[k], dzjk = zj - z[k];
                const double r2ik = dxik * dxik + dyik * dyik + dzik * dzik;
                const double r2jk = dxjk * dxjk + dyjk * dyjk + dzjk * dzjk;
                const bool ok = product ? r2ij * r2ik * r2jk <= rc6
                                        : (r2ij <= rc2 && r2ik <= rc2 && r2jk <= rc2);
                if (ok) {
                    out[n] = i; out[n + 1] = j; out[n + 2] = k;
                    n += 3;
                }
            }
        }
    }
    return n;
}

struct TaskAccum {
    double E2 = 0.0, W2 = 0.0, E3 = 0.0, W3 = 0.0;
    std::uint64_t p_trav = 0, p_acc = 0, t_trav = 0, t_acc = 0;
};

struct TaskScratch {
    std::vector<double> x, y, z, fx, fy, fz;
    std::vector<int> start;        // slot offsets, size slots+1
    std::vector<int> gid;          // filled only when recording
    std::vector<int> pending;      // accepted (i, j, k) triples from the scans
    std::vector<int> pairs;        // packed (i, j) intra-slot pairs, i < j
    std::vector<int> pairs_start;  // per-slot offsets into pairs, size slots+1
};

} // namespace detail

// Color-synchronous parallel executor. Colors run sequentially; tasks of one
// color are distributed over threads. Disjoint per-color write-sets plus
// fixed-order reduction of per-task partial sums make the results bitwise
// independent of the thread count.
class Executor {
public:
    ExecResult execute(const TraversalSchedule& sched, const CellGrid& grid, PhaseSpace& ps,
                       const Params& params, const ExecOptions& opts = {}) {
        using clock = std::chrono::steady_clock;
        params.validate();
        const std::size_t n = ps.size();
        pack_positions(grid, ps, n);

        const std::size_t ntasks = sched.task_count();
        accum_.assign(ntasks, detail::TaskAccum{});
        task_offset_.assign(sched.colors.size() + 1, 0);
        for (std::size_t c = 0; c < sched.colors.size(); ++c)
            task_offset_[c + 1] = task_offset_[c] + sched.colors[c].size();

        scratch_.resize(static_cast<std::size_t>(omp_get_max_threads()));
        const bool serial = opts.record_accepted != nullptr;

        const double rc2 = params.r_c * params.r_c;
        const double rc6 = rc2 * rc2 * rc2;

        ExecResult out;

        const auto tp0 = clock::now();
        run_pass(sched, grid, params, rc2, rc6, serial, opts, /*triple_pass=*/false);
        const auto tp1 = clock::now();
        if (opts.run_triplets) run_pass(sched, grid, params, rc2, rc6, serial, opts, true);
        const auto tp2 = clock::now();
        out.seconds_pair = std::chrono::duration<double>(tp1 - tp0).count();
        out.seconds_triple = std::chrono::duration<double>(tp2 - tp1).count();

        // fixed-order reduction
        for (const auto& a : accum_) {
            out.E2 += a.E2;
            out.W2 += a.W2;
            out.E3 += a.E3;
            out.W3 += a.W3;
            out.counters.pairs_traversed += a.p_trav;
            out.counters.pairs_accepted += a.p_acc;
            out.counters.triplets_traversed += a.t_trav;
            out.counters.triplets_accepted += a.t_acc;
        }

        for (std::size_t p = 0; p < n; ++p) {
            Vec3& f = ps.forces[grid.cell_particles[p]];
            f.x += fx_[p];
            f.y += fy_[p];
            f.z += fz_[p];
        }
        return out;
    }

private:
    std::vector<double> px_, py_, pz_, fx_, fy_, fz_;
    std::vector<detail::TaskAccum> accum_;
    std::vector<std::size_t> task_offset_;
    std::vector<detail::TaskScratch> scratch_;

    void pack_positions(const CellGrid& grid, const PhaseSpace& ps, std::size_t n) {
        px_.resize(n); py_.resize(n); pz_.resize(n);
        fx_.assign(n, 0.0); fy_.assign(n, 0.0); fz_.assign(n, 0.0);
        for (std::size_t p = 0; p < n; ++p) {
            const Vec3& r = ps.positions[grid.cell_particles[p]];
            px_[p] = r.x; py_[p] = r.y; pz_[p] = r.z;
        }
    }

    void run_pass(const TraversalSchedule& sched, const CellGrid& grid, const Params& params,
                  double rc2, double rc6, bool serial, const ExecOptions& opts,
                  bool triple_pass) {
        for (std::size_t color = 0; color < sched.colors.size(); ++color) {
            const auto& tasks = sched.colors[color];
            const std::int64_t nt = static_cast<std::int64_t>(tasks.size());
#pragma omp parallel for schedule(dynamic) if (!serial)
            for (std::int64_t ti = 0; ti < nt; ++ti) {
                auto& sc = scratch_[static_cast<std::size_t>(omp_get_thread_num())];
                const CellTask& task = tasks[static_cast<std::size_t>(ti)];
                if (!load_task(task, grid, sc, opts.record_accepted != nullptr)) continue;
                detail::TaskAccum acc;
                if (triple_pass)
                    run_task_triples(task, sched.newton, params, rc2, rc6, sc, acc, opts);
                else
                    run_task_pairs(task, sched.newton, params, rc2, sc, acc);
                scatter_forces(task, sched.newton, grid, sc);
                accum_[task_offset_[color] + static_cast<std::size_t>(ti)] = merge(
                    accum_[task_offset_[color] + static_cast<std::size_t>(ti)], acc);
            }
        }
    }

    static detail::TaskAccum merge(detail::TaskAccum a, const detail::TaskAccum& b) {
        a.E2 += b.E2; a.W2 += b.W2; a.E3 += b.E3; a.W3 += b.W3;
        a.p_trav += b.p_trav; a.p_acc += b.p_acc;
        a.t_trav += b.t_trav; a.t_acc += b.t_acc;
        return a;
    }

    bool load_task(const CellTask& task, const CellGrid& grid, detail::TaskScratch& sc,
                   bool want_gid) {
        const std::size_t ns = task.slots.size();
        sc.start.resize(ns + 1);
        int total = 0;
        sc.start[0] = 0;
        for (std::size_t s = 0; s < ns; ++s) {
            total += grid.bin_size(task.slots[s].cell);
            sc.start[s + 1] = total;
        }
        if (total == 0) return false;
        sc.x.resize(total); sc.y.resize(total); sc.z.resize(total);
        sc.fx.assign(total, 0.0); sc.fy.assign(total, 0.0); sc.fz.assign(total, 0.0);
        if (want_gid) sc.gid.resize(total);
        sc.pairs_start.resize(ns + 1);
        sc.pairs_start[0] = 0;
        for (std::size_t sl = 0; sl < ns; ++sl) {
            const int cnt = sc.start[sl + 1] - sc.start[sl];
            sc.pairs_start[sl + 1] = sc.pairs_start[sl] + cnt * (cnt - 1);
        }
        sc.pairs.resize(static_cast<std::size_t>(sc.pairs_start[ns]));
        for (std::size_t sl = 0; sl < ns; ++sl) {
            int w = sc.pairs_start[sl];
            for (int i = sc.start[sl]; i < sc.start[sl + 1]; ++i)
                for (int j = i + 1; j < sc.start[sl + 1]; ++j) {
                    sc.pairs[w] = i;
                    sc.pairs[w + 1] = j;
                    w += 2;
                }
        }
        for (std::size_t s = 0; s < ns; ++s) {
            const int cell = task.slots[s].cell;
            const Vec3 shift = task.slots[s].shift;
            const int src0 = grid.cell_start[cell];
            const int cnt = grid.bin_size(cell);
            const int dst0 = sc.start[s];
            for (int i = 0; i < cnt; ++i) {
                sc.x[dst0 + i] = px_[src0 + i] + shift.x;
                sc.y[dst0 + i] = py_[src0 + i] + shift.y;
                sc.z[dst0 + i] = pz_[src0 + i] + shift.z;
                if (want_gid) sc.gid[dst0 + i] = grid.cell_particles[src0 + i];
            }
        }
        return true;
    }

    void scatter_forces(const CellTask& task, bool newton, const CellGrid& grid,
                        const detail::TaskScratch& sc) {
        const std::size_t ns = newton ? task.slots.size() : 1;
        for (std::size_t s = 0; s < ns; ++s) {
            const int cell = task.slots[s].cell;
            const int src0 = sc.start[s];
            const int cnt = grid.bin_size(cell);
            const int dst0 = grid.cell_start[cell];
            for (int i = 0; i < cnt; ++i) {
                fx_[dst0 + i] += sc.fx[src0 + i];
                fy_[dst0 + i] += sc.fy[src0 + i];
                fz_[dst0 + i] += sc.fz[src0 + i];
            }
        }
    }

    // Accepted-interaction handlers, called from the scan/process loops.
    struct HotState {
        const double* X;
        const double* Y;
        const double* Z;
        detail::TaskScratch* sc;
        detail::TaskAccum* acc;
        double epsilon, sigma, nu;
        std::vector<std::array<int, 3>>* rec;
    };

    TRICELL_NOINLINE static void accept_lj(const HotState& h, int i, int j, double r2,
                                           bool newton) {
        const double s2 = h.sigma * h.sigma / r2;
        const double s6 = s2 * s2 * s2;
        const double u2 = 4.0 * h.epsilon * s6 * (s6 - 1.0);
        const double f = 24.0 * h.epsilon * s6 * (2.0 * s6 - 1.0) / r2;
        const double dx = h.X[i] - h.X[j], dy = h.Y[i] - h.Y[j], dz = h.Z[i] - h.Z[j];
        auto& sc = *h.sc;
        if (newton) {
            h.acc->E2 += u2;
            h.acc->W2 += f * r2;
            sc.fx[i] += f * dx; sc.fy[i] += f * dy; sc.fz[i] += f * dz;
            sc.fx[j] -= f * dx; sc.fy[j] -= f * dy; sc.fz[j] -= f * dz;
        } else {
            h.acc->E2 += 0.5 * u2;
            h.acc->W2 += 0.5 * f * r2;
            sc.fx[i] += f * dx; sc.fy[i] += f * dy; sc.fz[i] += f * dz;
        }
        ++h.acc->p_acc;
    }

    struct EW {
        double e, w;
    };

    template <bool NEWTON>
    static EW accept_triple(const double* __restrict X, const double* __restrict Y,
                            const double* __restrict Z, double* __restrict fx,
                            double* __restrict fy, double* __restrict fz, double nu, int i,
                            int j, int k) {
        const double dxij = X[i] - X[j], dyij = Y[i] - Y[j], dzij = Z[i] - Z[j];
        const double dxik = X[i] - X[k], dyik = Y[i] - Y[k], dzik = Z[i] - Z[k];
        const double dxjk = X[j] - X[k], dyjk = Y[j] - Y[k], dzjk = Z[j] - Z[k];
        const double r2ij = dxij * dxij + dyij * dyij + dzij * dzij;
        const double r2ik = dxik * dxik + dyik * dyik + dzik * dzik;
        const double r2jk = dxjk * dxjk + dyjk * dyjk + dzjk * dzjk;
        const auto ev = detail::atm_eval_r2(r2ij, r2ik, r2jk, nu);
        const double w = ev.g_ij * r2ij + ev.g_ik * r2ik + ev.g_jk * r2jk;
        if (NEWTON) {
            const double fijx = ev.g_ij * dxij, fijy = ev.g_ij * dyij, fijz = ev.g_ij * dzij;
            const double fikx = ev.g_ik * dxik, fiky = ev.g_ik * dyik, fikz = ev.g_ik * dzik;
            const double fjkx = ev.g_jk * dxjk, fjky = ev.g_jk * dyjk, fjkz = ev.g_jk * dzjk;
            fx[i] += fijx + fikx; fy[i] += fijy + fiky; fz[i] += fijz + fikz;
            fx[j] += fjkx - fijx; fy[j] += fjky - fijy; fz[j] += fjkz - fijz;
            fx[k] -= fikx + fjkx; fy[k] -= fiky + fjky; fz[k] -= fikz + fjkz;
            return {ev.u, w};
        }
        const double third = 1.0 / 3.0;
        fx[i] += ev.g_ij * dxij + ev.g_ik * dxik;
        fy[i] += ev.g_ij * dyij + ev.g_ik * dyik;
        fz[i] += ev.g_ij * dzij + ev.g_ik * dzik;
        return {third * ev.u, third * w};
    }

    void run_task_pairs(const CellTask& task, bool newton, const Params& params, double rc2,
                        detail::TaskScratch& sc, detail::TaskAccum& acc) {
        const double* __restrict X = sc.x.data();
        const double* __restrict Y = sc.y.data();
        const double* __restrict Z = sc.z.data();
        const HotState hot{X, Y, Z, &sc, &acc, params.epsilon, params.sigma, params.nu,
                           nullptr};

        auto lj_newton = [&](int i, int j) {
            const double dx = X[i] - X[j], dy = Y[i] - Y[j], dz = Z[i] - Z[j];
            const double r2 = dx * dx + dy * dy + dz * dz;
            if (r2 <= rc2) accept_lj(hot, i, j, r2, true);
        };
        // half-weighted, force only on the target i
        auto lj_target = [&](int i, int j) {
            const double dx = X[i] - X[j], dy = Y[i] - Y[j], dz = Z[i] - Z[j];
            const double r2 = dx * dx + dy * dy + dz * dz;
            if (r2 <= rc2) accept_lj(hot, i, j, r2, false);
        };

        if (newton) {
            const int b0 = sc.start[0], b1 = sc.start[1];
            const std::uint64_t nb = static_cast<std::uint64_t>(b1 - b0);
            acc.p_trav += nb * (nb - 1) / 2;
            for (int i = b0; i < b1; ++i)
                for (int j = i + 1; j < b1; ++j) lj_newton(i, j);
            for (const auto& pr : task.pairs) {
                const int a0 = sc.start[pr.a], a1 = sc.start[pr.a + 1];
                const int c0 = sc.start[pr.b], c1 = sc.start[pr.b + 1];
                acc.p_trav += static_cast<std::uint64_t>(a1 - a0) *
                              static_cast<std::uint64_t>(c1 - c0);
                for (int i = a0; i < a1; ++i)
                    for (int j = c0; j < c1; ++j) lj_newton(i, j);
            }
        } else {
            const int b0 = sc.start[0], b1 = sc.start[1];
            const std::uint64_t nb = static_cast<std::uint64_t>(b1 - b0);
            for (const auto& pr : task.pairs) {
                if (pr.b == 0) {
                    acc.p_trav += nb * (nb - 1);
                    for (int i = b0; i < b1; ++i)
                        for (int j = b0; j < b1; ++j)
                            if (j != i) lj_target(i, j);
                } else {
                    const int c0 = sc.start[pr.b], c1 = sc.start[pr.b + 1];
                    acc.p_trav += nb * static_cast<std::uint64_t>(c1 - c0);
                    for (int i = b0; i < b1; ++i)
                        for (int j = c0; j < c1; ++j) lj_target(i, j);
                }
            }
        }
    }

    void run_task_triples(const CellTask& task, bool newton, const Params& params, double rc2,
                          double rc6, detail::TaskScratch& sc, detail::TaskAccum& acc,
                          const ExecOptions& opts) {
        const double* X = sc.x.data();
        const double* Y = sc.y.data();
        const double* Z = sc.z.data();
        const bool product = params.cutoff_mode == Cutoff::Product;
        double* __restrict fx = sc.fx.data();
        double* __restrict fy = sc.fy.data();
        double* __restrict fz = sc.fz.data();
        const double nu = params.nu;
        double e3 = 0.0, w3 = 0.0;

        auto grow = [&](std::uint64_t candidates) {
            if (sc.pending.size() < 3 * candidates) sc.pending.resize(3 * candidates);
            return sc.pending.data();
        };
        auto process = [&](int n) {
            const int* __restrict pend = sc.pending.data();
            if (newton)
                for (int p = 0; p < n; p += 3) {
                    const EW ew = accept_triple<true>(X, Y, Z, fx, fy, fz, nu, pend[p],
                                                      pend[p + 1], pend[p + 2]);
                    e3 += ew.e;
                    w3 += ew.w;
                }
            else
                for (int p = 0; p < n; p += 3) {
                    const EW ew = accept_triple<false>(X, Y, Z, fx, fy, fz, nu, pend[p],
                                                       pend[p + 1], pend[p + 2]);
                    e3 += ew.e;
                    w3 += ew.w;
                }
            acc.t_acc += static_cast<std::uint64_t>(n) / 3;
            if (opts.record_accepted)
                for (int p = 0; p < n; p += 3) {
                    std::array<int, 3> t{sc.gid[pend[p]], sc.gid[pend[p + 1]],
                                         sc.gid[pend[p + 2]]};
                    if (t[0] > t[1]) std::swap(t[0], t[1]);
                    if (t[1] > t[2]) std::swap(t[1], t[2]);
                    if (t[0] > t[1]) std::swap(t[0], t[1]);
                    opts.record_accepted->push_back(t);
                }
        };

        if (newton) {
            const int b0 = sc.start[0], b1 = sc.start[1];
            const std::uint64_t nb = static_cast<std::uint64_t>(b1 - b0);
            std::uint64_t cand = detail::count_one_cell(nb);
            acc.t_trav += cand;
            process(detail::scan_one_cell(X, Y, Z, b0, b1, rc2, rc6, product, grow(cand)));
            for (const auto& pr : task.pairs) {
                const int a0 = sc.start[pr.a], a1 = sc.start[pr.a + 1];
                const int c0 = sc.start[pr.b], c1 = sc.start[pr.b + 1];
                cand = detail::count_two_cell(static_cast<std::uint64_t>(a1 - a0),
                                              static_cast<std::uint64_t>(c1 - c0));
                acc.t_trav += cand;
                const int* bonds = sc.pairs.data();
                process(detail::scan_pairs_ext(X, Y, Z, bonds + sc.pairs_start[pr.a],
                                               sc.pairs_start[pr.a + 1] - sc.pairs_start[pr.a],
                                               c0, c1, rc2, rc6, product, grow(cand)));
                process(detail::scan_pairs_ext(X, Y, Z, bonds + sc.pairs_start[pr.b],
                                               sc.pairs_start[pr.b + 1] - sc.pairs_start[pr.b],
                                               a0, a1, rc2, rc6, product, grow(cand)));
            }
            for (const auto& tr : task.triples) {
                const int a0 = sc.start[tr.a], a1 = sc.start[tr.a + 1];
                const int c0 = sc.start[tr.b], c1 = sc.start[tr.b + 1];
                const int d0 = sc.start[tr.c], d1 = sc.start[tr.c + 1];
                cand = detail::count_three_cell(static_cast<std::uint64_t>(a1 - a0),
                                                static_cast<std::uint64_t>(c1 - c0),
                                                static_cast<std::uint64_t>(d1 - d0));
                acc.t_trav += cand;
                process(detail::scan_three_cell(X, Y, Z, a0, a1, c0, c1, d0, d1, rc2, rc6,
                                                product, grow(cand)));
            }
        } else {
            const int b0 = sc.start[0], b1 = sc.start[1];
            const std::uint64_t nb = static_cast<std::uint64_t>(b1 - b0);
            // base-internal: every internal triplet visited once per target
            std::uint64_t cand = nb * (nb - 1) * (nb - 2) / 2;
            acc.t_trav += cand;
            process(
                detail::scan_target_internal(X, Y, Z, b0, b1, rc2, rc6, product, grow(cand)));
            for (const auto& tr : task.triples) {
                const int s1 = tr.b, s2 = tr.c;
                if (s1 == 0) {
                    const int c0 = sc.start[s2], c1 = sc.start[s2 + 1];
                    cand = nb * (nb - 1) * static_cast<std::uint64_t>(c1 - c0);
                    acc.t_trav += cand;
                    process(detail::scan_target_base_ext(X, Y, Z, b0, b1, c0, c1, rc2, rc6,
                                                         product, grow(cand)));
                } else if (s1 == s2) {
                    const int c0 = sc.start[s1], c1 = sc.start[s1 + 1];
                    const std::uint64_t ns = static_cast<std::uint64_t>(c1 - c0);
                    cand = nb * (ns * (ns - 1) / 2);
                    acc.t_trav += cand;
                    process(detail::scan_target_pair_ext(X, Y, Z, b0, b1, c0, c1, rc2, rc6,
                                                         product, grow(cand)));
                } else {
                    const int c0 = sc.start[s1], c1 = sc.start[s1 + 1];
                    const int d0 = sc.start[s2], d1 = sc.start[s2 + 1];
                    cand = nb * static_cast<std::uint64_t>(c1 - c0) *
                           static_cast<std::uint64_t>(d1 - d0);
                    acc.t_trav += cand;
                    process(detail::scan_three_cell(X, Y, Z, b0, b1, c0, c1, d0, d1, rc2, rc6,
                                                    product, grow(cand)));
                }
            }
        }
        acc.E3 += e3;
        acc.W3 += w3;
    }

};

// Grid + schedule + executor bundle for repeated force evaluations on one
// box/traversal configuration.
struct Engine {
    CellGrid grid;
    TraversalSchedule schedule;
    Executor executor;

    Engine(const Box& box, const Params& params)
        : grid(build_grid(box, params.r_c)), schedule(make_schedule(params.traversal, grid)) {}

    ExecResult evaluate(PhaseSpace& ps, const Params& params, const ExecOptions& opts = {}) {
        bin_particles(grid, ps);
        ps.zero_forces();
        ExecOptions o = opts;
        o.run_triplets = opts.run_triplets && params.nu != 0.0;
        return executor.execute(schedule, grid, ps, params, o);
    }
};

} // namespace tricell
