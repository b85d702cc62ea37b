#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "tricell/cell_grid.hpp"
#include "tricell/params.hpp"

namespace tricell {

// One cell participating in a task, with the periodic position correction
// that places its particles in the base cell's frame.
struct TaskSlot {
    int cell;    // flat index
    Vec3 shift;
};

// Slot-index pair/triple entries. Pairs carry both the pair potential and the
// 2+1 / 1+2 three-body splits; triples are Cartesian three-cell routines.
struct TaskPair {
    int a, b;
};

struct TaskTriple {
    int a, b, c;
};

struct CellTask {
    int base_cell;
    std::vector<TaskSlot> slots;   // slot 0 is always the base cell
    std::vector<TaskPair> pairs;
    std::vector<TaskTriple> triples;
};

struct TraversalSchedule {
    Traversal kind = Traversal::C08;
    bool newton = true;
    int nx = 0, ny = 0, nz = 0;
    std::vector<std::vector<CellTask>> colors;

    std::size_t task_count() const {
        std::size_t n = 0;
        for (const auto& c : colors) n += c.size();
        return n;
    }
};

namespace detail {

// Partition of Z_n into classes whose members are pairwise at least `d` apart
// in circular distance. If d divides n this is the stride-d pattern; the
// remainder coordinates become extra singleton classes.
inline std::vector<int> axis_color_classes(int n, int d, int& num_classes) {
    std::vector<int> cls(n);
    const int q = n / d;
    const int r = n % d;
    for (int i = 0; i < d * q; ++i) cls[i] = i % d;
    for (int i = d * q; i < n; ++i) cls[i] = d + (i - d * q);
    num_classes = (r == 0) ? d : d + r;
    return cls;
}

// 2x2x2 block geometry for the compact traversal. Slot u = ux + 2 uy + 4 uz.
// A pair/triple of block cells is owned by the block whose anchor is the
// componentwise minimum of its members, i.e. entries with min = 0 here.
struct BlockTables {
    std::vector<TaskPair> pairs;      // 13
    std::vector<TaskTriple> triples;  // 44
};

inline const BlockTables& block_tables() {
    static const BlockTables tables = [] {
        BlockTables t;
        auto coord = [](int u, int axis) { return (u >> axis) & 1; };
        auto min_is_zero = [&](std::initializer_list<int> cells) {
            for (int axis = 0; axis < 3; ++axis) {
                int m = 1;
                for (int u : cells) m = std::min(m, coord(u, axis));
                if (m != 0) return false;
            }
            return true;
        };
        for (int u = 0; u < 8; ++u)
            for (int v = u + 1; v < 8; ++v)
                if (min_is_zero({u, v})) t.pairs.push_back({u, v});
        for (int u = 0; u < 8; ++u)
            for (int v = u + 1; v < 8; ++v)
                for (int w = v + 1; w < 8; ++w)
                    if (min_is_zero({u, v, w})) t.triples.push_back({u, v, w});
        return t;
    }();
    return tables;
}

inline CellTask make_task_c18(const CellGrid& grid, const CellIndex& ci) {
    CellTask t;
    t.base_cell = ci.flat;
    t.slots.reserve(14);
    t.slots.push_back({ci.flat, Vec3{}});
    for (const auto& o : kForwardOffsets) {
        Vec3 shift;
        CellIndex cj = neighbor(ci, o, grid, shift);
        t.slots.push_back({cj.flat, shift});
    }
    for (int m = 1; m <= 13; ++m) t.pairs.push_back({0, m});
    for (int m = 1; m <= 13; ++m)
        for (int n = m + 1; n <= 13; ++n) t.triples.push_back({0, m, n});
    return t;
}

inline CellTask make_task_c08(const CellGrid& grid, const CellIndex& ci) {
    CellTask t;
    t.base_cell = ci.flat;
    t.slots.reserve(8);
    for (int u = 0; u < 8; ++u) {
        const CellOffset o{u & 1, (u >> 1) & 1, (u >> 2) & 1};
        Vec3 shift;
        CellIndex cj = neighbor(ci, o, grid, shift);
        t.slots.push_back({cj.flat, shift});
    }
    const auto& tables = block_tables();
    t.pairs = tables.pairs;
    t.triples = tables.triples;
    return t;
}

inline CellTask make_task_c01(const CellGrid& grid, const CellIndex& ci) {
    CellTask t;
    t.base_cell = ci.flat;
    t.slots.reserve(27);
    t.slots.push_back({ci.flat, Vec3{}});
    for (const auto& o : all_neighbor_offsets()) {
        Vec3 shift;
        CellIndex cj = neighbor(ci, o, grid, shift);
        t.slots.push_back({cj.flat, shift});
    }
    for (int s = 0; s < 27; ++s) t.pairs.push_back({0, s});
    for (int s1 = 0; s1 < 27; ++s1)
        for (int s2 = s1; s2 < 27; ++s2) {
            if (s1 == 0 && s2 == 0) continue;  // base-internal triples are the singles routine
            t.triples.push_back({0, s1, s2});
        }
    return t;
}

} // namespace detail

// Builds the color-partitioned task schedule for one traversal on a grid.
//
// Coloring uses per-axis circular classes sized to the traversal's write-set
// span: (3,3,2) for the forward-neighbor traversal and (2,2,2) for the block
// traversal. Axes whose cell count is not divisible by the span get extra
// classes rather than being rejected, so odd grids run with more colors.
//
// On 3-cell axes the block traversal cannot represent cell triplets that span
// the full axis through the periodic wrap; with cell size >= r_c such
// triplets never satisfy the pair cutoff, so pair-cutoff forces stay exact.
inline TraversalSchedule make_schedule(Traversal kind, const CellGrid& grid) {
    TraversalSchedule s;
    s.kind = kind;
    s.newton = (kind != Traversal::C01);
    s.nx = grid.nx;
    s.ny = grid.ny;
    s.nz = grid.nz;

    int ncx = 1, ncy = 1, ncz = 1;
    std::vector<int> clx, cly, clz;
    if (kind == Traversal::C01) {
        clx.assign(grid.nx, 0);
        cly.assign(grid.ny, 0);
        clz.assign(grid.nz, 0);
    } else {
        const int d_xy = (kind == Traversal::C18) ? 3 : 2;
        const int d_z = 2;
        clx = detail::axis_color_classes(grid.nx, d_xy, ncx);
        cly = detail::axis_color_classes(grid.ny, d_xy, ncy);
        clz = detail::axis_color_classes(grid.nz, d_z, ncz);
    }

    s.colors.assign(static_cast<std::size_t>(ncx) * ncy * ncz, {});
    for (int cz = 0; cz < grid.nz; ++cz)
        for (int cy = 0; cy < grid.ny; ++cy)
            for (int cx = 0; cx < grid.nx; ++cx) {
                const CellIndex ci = grid.index(cx, cy, cz);
                const int color = clx[cx] + ncx * (cly[cy] + ncy * clz[cz]);
                switch (kind) {
                    case Traversal::C01:
                        s.colors[color].push_back(detail::make_task_c01(grid, ci));
                        break;
                    case Traversal::C18:
                        s.colors[color].push_back(detail::make_task_c18(grid, ci));
                        break;
                    case Traversal::C08:
                        s.colors[color].push_back(detail::make_task_c08(grid, ci));
                        break;
                }
            }
    return s;
}

} // namespace tricell
