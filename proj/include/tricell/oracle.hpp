#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "tricell/phase_space.hpp"
#include "tricell/potentials.hpp"
#include "tricell/schedule.hpp"

namespace tricell {
namespace oracle {

struct OracleResult {
    std::vector<Vec3> forces;
    double E2 = 0.0, E3 = 0.0, W2 = 0.0, W3 = 0.0;
    std::uint64_t accepted_triplets = 0;
    std::uint64_t accepted_pairs = 0;
};

namespace detail {

struct Contribution {
    double u;
    Vec3 f_ij, f_ik, f_jk;  // primitive pair-forces
    double w3;
};

inline bool eval_triplet(const Vec3& d_ij, const Vec3& d_ik, const Vec3& d_jk, double rc2,
                         double rc6, Cutoff mode, double nu, Contribution& c) {
    const double x = norm2(d_ij);
    const double y = norm2(d_ik);
    const double z = norm2(d_jk);
    if (!cutoff_accept_r2(x, y, z, rc2, rc6, mode)) return false;
    const auto ev = tricell::detail::atm_eval_r2(x, y, z, nu);
    c.u = ev.u;
    c.f_ij = d_ij * ev.g_ij;
    c.f_ik = d_ik * ev.g_ik;
    c.f_jk = d_jk * ev.g_jk;
    c.w3 = ev.g_ij * x + ev.g_ik * y + ev.g_jk * z;
    return true;
}

} // namespace detail

// Brute-force O(N^2)+O(N^3) reference with per-pair minimum-image distances.
// With neighborhood_limited, triplets are additionally required to sit in
// cells (own floor-division binning) that differ by at most one per axis
// under periodic wrap.
inline OracleResult brute_force(const PhaseSpace& ps, const Params& params,
                                bool neighborhood_limited = false) {
    const std::size_t n = ps.size();
    if (n > 2000)
        throw std::invalid_argument("oracle::brute_force: refusing N > 2000");
    params.validate();

    OracleResult res;
    res.forces.assign(n, Vec3{});
    const double rc2 = params.r_c * params.r_c;
    const double rc6 = rc2 * rc2 * rc2;
    const Box& box = ps.box;

    int ncx = 0, ncy = 0, ncz = 0;
    std::vector<int> cx, cy, cz;
    if (neighborhood_limited) {
        ncx = static_cast<int>(std::floor(box.L.x / params.r_c));
        ncy = static_cast<int>(std::floor(box.L.y / params.r_c));
        ncz = static_cast<int>(std::floor(box.L.z / params.r_c));
        cx.resize(n); cy.resize(n); cz.resize(n);
        auto bin = [](double v, double len, int cells) {
            int c = static_cast<int>(std::floor(v / (len / cells)));
            if (c >= cells) c = cells - 1;
            if (c < 0) c = 0;
            return c;
        };
        for (std::size_t i = 0; i < n; ++i) {
            cx[i] = bin(ps.positions[i].x, box.L.x, ncx);
            cy[i] = bin(ps.positions[i].y, box.L.y, ncy);
            cz[i] = bin(ps.positions[i].z, box.L.z, ncz);
        }
    }
    auto cells_adjacent = [&](std::size_t a, std::size_t b) {
        auto circ = [](int d, int cells) {
            d = std::abs(d);
            return std::min(d, cells - d);
        };
        return circ(cx[a] - cx[b], ncx) <= 1 && circ(cy[a] - cy[b], ncy) <= 1 &&
               circ(cz[a] - cz[b], ncz) <= 1;
    };

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const Vec3 d = minimum_image(ps.positions[i] - ps.positions[j], box);
            const double r2 = norm2(d);
            if (r2 <= rc2) {
                double u2, f;
                lj_energy_force(r2, params, u2, f);
                res.E2 += u2;
                res.W2 += f * r2;
                res.forces[i] += d * f;
                res.forces[j] -= d * f;
                ++res.accepted_pairs;
            }
        }
    }

    if (params.nu == 0.0) return res;

    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t k = j + 1; k < n; ++k) {
                if (neighborhood_limited &&
                    !(cells_adjacent(i, j) && cells_adjacent(i, k) && cells_adjacent(j, k)))
                    continue;
                const Vec3 d_ij = minimum_image(ps.positions[i] - ps.positions[j], box);
                const Vec3 d_ik = minimum_image(ps.positions[i] - ps.positions[k], box);
                const Vec3 d_jk = minimum_image(ps.positions[j] - ps.positions[k], box);
                detail::Contribution c;
                if (!detail::eval_triplet(d_ij, d_ik, d_jk, rc2, rc6, params.cutoff_mode,
                                          params.nu, c))
                    continue;
                res.E3 += c.u;
                res.W3 += c.w3;
                res.forces[i] += c.f_ij + c.f_ik;
                res.forces[j] += c.f_jk - c.f_ij;
                res.forces[k] -= c.f_ik + c.f_jk;
                ++res.accepted_triplets;
            }
    return res;
}

// Replays a traversal schedule's emitted cell singles/pairs/triplets with
// naive loops: own binning, plain Vec3 arithmetic, no coloring, no packing.
// Under the product cutoff each traversal accepts a different triplet subset,
// so equality is only meaningful against the schedule actually executed.
inline OracleResult reference_for_schedule(const TraversalSchedule& sched, const PhaseSpace& ps,
                                           const Params& params) {
    params.validate();
    const std::size_t n = ps.size();
    const Box& box = ps.box;
    OracleResult res;
    res.forces.assign(n, Vec3{});
    const double rc2 = params.r_c * params.r_c;
    const double rc6 = rc2 * rc2 * rc2;

    // independent binning
    const int ncx = sched.nx, ncy = sched.ny, ncz = sched.nz;
    std::vector<std::vector<int>> bins(static_cast<std::size_t>(ncx) * ncy * ncz);
    auto bin_axis = [](double v, double len, int cells) {
        int c = static_cast<int>(std::floor(v * cells / len));
        if (c >= cells) c = cells - 1;
        if (c < 0) c = 0;
        return c;
    };
    for (std::size_t i = 0; i < n; ++i) {
        const int bx = bin_axis(ps.positions[i].x, box.L.x, ncx);
        const int by = bin_axis(ps.positions[i].y, box.L.y, ncy);
        const int bz = bin_axis(ps.positions[i].z, box.L.z, ncz);
        bins[static_cast<std::size_t>(bx + ncx * (by + ncy * bz))].push_back(
            static_cast<int>(i));
    }

    struct SlotView {
        const std::vector<int>* ids;
        Vec3 shift;
    };

    auto pos = [&](const SlotView& s, std::size_t idx) {
        return ps.positions[static_cast<std::size_t>((*s.ids)[idx])] + s.shift;
    };

    auto add_triplet = [&](int gi, int gj, int gk, const Vec3& pi, const Vec3& pj,
                           const Vec3& pk, bool newton) {
        detail::Contribution c;
        if (!detail::eval_triplet(pi - pj, pi - pk, pj - pk, rc2, rc6, params.cutoff_mode,
                                  params.nu, c))
            return;
        if (newton) {
            res.E3 += c.u;
            res.W3 += c.w3;
            res.forces[gi] += c.f_ij + c.f_ik;
            res.forces[gj] += c.f_jk - c.f_ij;
            res.forces[gk] -= c.f_ik + c.f_jk;
        } else {
            res.E3 += c.u / 3.0;
            res.W3 += c.w3 / 3.0;
            res.forces[gi] += c.f_ij + c.f_ik;
        }
        ++res.accepted_triplets;
    };

    auto add_pair = [&](int gi, int gj, const Vec3& pi, const Vec3& pj, bool newton) {
        const Vec3 d = pi - pj;
        const double r2 = norm2(d);
        if (r2 > rc2) return;
        double u2, f;
        lj_energy_force(r2, params, u2, f);
        if (newton) {
            res.E2 += u2;
            res.W2 += f * r2;
            res.forces[gi] += d * f;
            res.forces[gj] -= d * f;
        } else {
            res.E2 += 0.5 * u2;
            res.W2 += 0.5 * f * r2;
            res.forces[gi] += d * f;
        }
        ++res.accepted_pairs;
    };

    const bool do_triples = params.nu != 0.0;

    for (const auto& color : sched.colors)
        for (const auto& task : color) {
            std::vector<SlotView> slots;
            slots.reserve(task.slots.size());
            for (const auto& s : task.slots)
                slots.push_back({&bins[static_cast<std::size_t>(s.cell)], s.shift});
            const auto& base = slots[0];
            const std::size_t nb = base.ids->size();

            if (sched.newton) {
                for (std::size_t i = 0; i < nb; ++i)
                    for (std::size_t j = i + 1; j < nb; ++j)
                        add_pair((*base.ids)[i], (*base.ids)[j], pos(base, i), pos(base, j),
                                 true);
                for (const auto& pr : task.pairs) {
                    const auto& A = slots[static_cast<std::size_t>(pr.a)];
                    const auto& B = slots[static_cast<std::size_t>(pr.b)];
                    for (std::size_t i = 0; i < A.ids->size(); ++i)
                        for (std::size_t j = 0; j < B.ids->size(); ++j)
                            add_pair((*A.ids)[i], (*B.ids)[j], pos(A, i), pos(B, j), true);
                }
                if (!do_triples) continue;
                for (std::size_t i = 0; i < nb; ++i)
                    for (std::size_t j = i + 1; j < nb; ++j)
                        for (std::size_t k = j + 1; k < nb; ++k)
                            add_triplet((*base.ids)[i], (*base.ids)[j], (*base.ids)[k],
                                        pos(base, i), pos(base, j), pos(base, k), true);
                for (const auto& pr : task.pairs) {
                    const auto& A = slots[static_cast<std::size_t>(pr.a)];
                    const auto& B = slots[static_cast<std::size_t>(pr.b)];
                    for (std::size_t i = 0; i < A.ids->size(); ++i)
                        for (std::size_t j = i + 1; j < A.ids->size(); ++j)
                            for (std::size_t k = 0; k < B.ids->size(); ++k)
                                add_triplet((*A.ids)[i], (*A.ids)[j], (*B.ids)[k], pos(A, i),
                                            pos(A, j), pos(B, k), true);
                    for (std::size_t i = 0; i < B.ids->size(); ++i)
                        for (std::size_t j = i + 1; j < B.ids->size(); ++j)
                            for (std::size_t k = 0; k < A.ids->size(); ++k)
                                add_triplet((*B.ids)[i], (*B.ids)[j], (*A.ids)[k], pos(B, i),
                                            pos(B, j), pos(A, k), true);
                }
                for (const auto& tr : task.triples) {
                    const auto& A = slots[static_cast<std::size_t>(tr.a)];
                    const auto& B = slots[static_cast<std::size_t>(tr.b)];
                    const auto& C = slots[static_cast<std::size_t>(tr.c)];
                    for (std::size_t i = 0; i < A.ids->size(); ++i)
                        for (std::size_t j = 0; j < B.ids->size(); ++j)
                            for (std::size_t k = 0; k < C.ids->size(); ++k)
                                add_triplet((*A.ids)[i], (*B.ids)[j], (*C.ids)[k], pos(A, i),
                                            pos(B, j), pos(C, k), true);
                }
            } else {
                for (const auto& pr : task.pairs) {
                    const auto& S = slots[static_cast<std::size_t>(pr.b)];
                    for (std::size_t i = 0; i < nb; ++i)
                        for (std::size_t j = 0; j < S.ids->size(); ++j) {
                            if (pr.b == 0 && i == j) continue;
                            add_pair((*base.ids)[i], (*S.ids)[j], pos(base, i), pos(S, j),
                                     false);
                        }
                }
                if (!do_triples) continue;
                for (std::size_t i = 0; i < nb; ++i)
                    for (std::size_t j = 0; j < nb; ++j) {
                        if (j == i) continue;
                        for (std::size_t k = j + 1; k < nb; ++k) {
                            if (k == i) continue;
                            add_triplet((*base.ids)[i], (*base.ids)[j], (*base.ids)[k],
                                        pos(base, i), pos(base, j), pos(base, k), false);
                        }
                    }
                for (const auto& tr : task.triples) {
                    const int s1 = tr.b, s2 = tr.c;
                    const auto& S1 = slots[static_cast<std::size_t>(s1)];
                    const auto& S2 = slots[static_cast<std::size_t>(s2)];
                    for (std::size_t i = 0; i < nb; ++i) {
                        if (s1 == 0) {
                            for (std::size_t j = 0; j < nb; ++j) {
                                if (j == i) continue;
                                for (std::size_t k = 0; k < S2.ids->size(); ++k)
                                    add_triplet((*base.ids)[i], (*base.ids)[j], (*S2.ids)[k],
                                                pos(base, i), pos(base, j), pos(S2, k), false);
                            }
                        } else if (s1 == s2) {
                            for (std::size_t j = 0; j < S1.ids->size(); ++j)
                                for (std::size_t k = j + 1; k < S1.ids->size(); ++k)
                                    add_triplet((*base.ids)[i], (*S1.ids)[j], (*S1.ids)[k],
                                                pos(base, i), pos(S1, j), pos(S1, k), false);
                        } else {
                            for (std::size_t j = 0; j < S1.ids->size(); ++j)
                                for (std::size_t k = 0; k < S2.ids->size(); ++k)
                                    add_triplet((*base.ids)[i], (*S1.ids)[j], (*S2.ids)[k],
                                                pos(base, i), pos(S1, j), pos(S2, k), false);
                        }
                    }
                }
            }
        }
    return res;
}

} // namespace oracle
} // namespace tricell
