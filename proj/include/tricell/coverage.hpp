#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "tricell/schedule.hpp"

namespace tricell {
namespace coverage {

using PairKey = std::array<int, 2>;
using TripleKey = std::array<int, 3>;

inline PairKey pair_key(int a, int b) {
    if (a > b) std::swap(a, b);
    return {a, b};
}

inline TripleKey triple_key(int a, int b, int c) {
    TripleKey k{a, b, c};
    std::sort(k.begin(), k.end());
    return k;
}

// Emitted unordered cell pairs with multiplicities (pair entries only).
inline std::map<PairKey, int> emitted_pairs(const TraversalSchedule& s) {
    std::map<PairKey, int> out;
    for (const auto& color : s.colors)
        for (const auto& t : color)
            for (const auto& pr : t.pairs) {
                const int a = t.slots[static_cast<std::size_t>(pr.a)].cell;
                const int b = t.slots[static_cast<std::size_t>(pr.b)].cell;
                if (a == b) continue;  // base-self entries of the non-Newton traversal
                ++out[pair_key(a, b)];
            }
    return out;
}

// Emitted unordered cell triples with multiplicities (entries whose three
// slots are distinct cells).
inline std::map<TripleKey, int> emitted_triples(const TraversalSchedule& s) {
    std::map<TripleKey, int> out;
    for (const auto& color : s.colors)
        for (const auto& t : color)
            for (const auto& tr : t.triples) {
                const int a = t.slots[static_cast<std::size_t>(tr.a)].cell;
                const int b = t.slots[static_cast<std::size_t>(tr.b)].cell;
                const int c = t.slots[static_cast<std::size_t>(tr.c)].cell;
                if (a == b || a == c || b == c) continue;
                ++out[triple_key(a, b, c)];
            }
    return out;
}

inline int circular_distance(int a, int b, int n) {
    int d = a - b;
    if (d < 0) d = -d;
    return std::min(d, n - d);
}

inline bool cells_adjacent(const CellGrid& g, int fa, int fb) {
    const CellIndex a = g.index_of_flat(fa);
    const CellIndex b = g.index_of_flat(fb);
    return circular_distance(a.cx, b.cx, g.nx) <= 1 && circular_distance(a.cy, b.cy, g.ny) <= 1 &&
           circular_distance(a.cz, b.cz, g.nz) <= 1;
}

// All unordered adjacent cell pairs of a periodic grid.
inline std::set<PairKey> brute_adjacent_pairs(const CellGrid& g) {
    std::set<PairKey> out;
    const int nc = g.cell_count();
    const auto offsets = all_neighbor_offsets();
    for (int f = 0; f < nc; ++f) {
        const CellIndex ci = g.index_of_flat(f);
        for (const auto& o : offsets) {
            Vec3 shift;
            const CellIndex cj = neighbor(ci, o, g, shift);
            if (cj.flat != f) out.insert(pair_key(f, cj.flat));
        }
    }
    return out;
}

// All unordered cell triples that are pairwise adjacent on the periodic grid.
inline std::set<TripleKey> brute_pairwise_adjacent_triples(const CellGrid& g) {
    std::set<TripleKey> out;
    const int nc = g.cell_count();
    for (int a = 0; a < nc; ++a)
        for (int b = a + 1; b < nc; ++b) {
            if (!cells_adjacent(g, a, b)) continue;
            for (int c = b + 1; c < nc; ++c)
                if (cells_adjacent(g, a, c) && cells_adjacent(g, b, c))
                    out.insert(triple_key(a, b, c));
        }
    return out;
}

// Pairwise-adjacent triples that admit a consistent embedding in one 27-cell
// neighborhood (offsets within {-1,0,1}^3 whose pairwise differences stay in
// that range). On grids with at least 4 cells per axis this is the same set
// as brute_pairwise_adjacent_triples; on 3-cell axes the wrap-spanning
// triples drop out.
inline std::set<TripleKey> brute_embeddable_triples(const CellGrid& g) {
    std::set<TripleKey> out;
    const int nc = g.cell_count();
    const auto offsets = all_neighbor_offsets();
    auto diff_ok = [](const CellOffset& a, const CellOffset& b) {
        return std::abs(a.dx - b.dx) <= 1 && std::abs(a.dy - b.dy) <= 1 &&
               std::abs(a.dz - b.dz) <= 1;
    };
    for (int f = 0; f < nc; ++f) {
        const CellIndex ci = g.index_of_flat(f);
        for (std::size_t m = 0; m < offsets.size(); ++m) {
            Vec3 shift;
            const int b = neighbor(ci, offsets[m], g, shift).flat;
            if (b == f) continue;
            for (std::size_t n = m + 1; n < offsets.size(); ++n) {
                if (!diff_ok(offsets[m], offsets[n])) continue;
                const int c = neighbor(ci, offsets[n], g, shift).flat;
                if (c == f || c == b) continue;
                out.insert(triple_key(f, b, c));
            }
        }
    }
    return out;
}

// Cells written by a task: all slots under Newton, the base cell otherwise.
inline std::set<int> write_set(const CellTask& t, bool newton) {
    std::set<int> out;
    if (newton)
        for (const auto& s : t.slots) out.insert(s.cell);
    else
        out.insert(t.base_cell);
    return out;
}

// Within every color, no cell may be written by two different tasks.
inline bool colors_race_free(const TraversalSchedule& s) {
    for (const auto& color : s.colors) {
        std::set<int> seen;
        for (const auto& t : color) {
            for (int c : write_set(t, s.newton)) {
                if (!seen.insert(c).second) return false;
            }
        }
    }
    return true;
}

} // namespace coverage
} // namespace tricell
