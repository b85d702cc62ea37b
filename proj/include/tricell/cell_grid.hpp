#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "tricell/phase_space.hpp"
#include "tricell/vec3.hpp"

namespace tricell {

// Lexicographic cell index, x fastest: flat = cx + nx*(cy + ny*cz).
struct CellIndex {
    int cx, cy, cz;
    int flat;
};

struct CellOffset {
    int dx, dy, dz;
};

// The 13 forward offsets in half-shell order (x step, then y row, then z
// plane). "Forward" means the unwrapped lexicographic index grows, i.e. the
// first nonzero component in (z, y, x)-major comparison is positive.
inline constexpr std::array<CellOffset, 13> kForwardOffsets = {{
    {1, 0, 0},
    {-1, 1, 0}, {0, 1, 0}, {1, 1, 0},
    {-1, -1, 1}, {0, -1, 1}, {1, -1, 1},
    {-1, 0, 1}, {0, 0, 1}, {1, 0, 1},
    {-1, 1, 1}, {0, 1, 1}, {1, 1, 1},
}};

inline constexpr bool is_forward(const CellOffset& o) {
    if (o.dz != 0) return o.dz > 0;
    if (o.dy != 0) return o.dy > 0;
    return o.dx > 0;
}

inline std::array<CellOffset, 26> all_neighbor_offsets() {
    std::array<CellOffset, 26> out{};
    int k = 0;
    for (int dz = -1; dz <= 1; ++dz)
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx)
                if (dx != 0 || dy != 0 || dz != 0) out[k++] = {dx, dy, dz};
    return out;
}

// Linked-cell grid with periodic wrap. Particle bins are stored CSR-style,
// ascending particle index within each cell.
struct CellGrid {
    int nx = 0, ny = 0, nz = 0;
    Vec3 cell_len{};
    Box box;

    std::vector<int> cell_start;      // size cell_count()+1
    std::vector<int> cell_particles;  // size N
    std::vector<int> cell_of;         // size N

    int cell_count() const { return nx * ny * nz; }

    CellIndex index(int cx, int cy, int cz) const {
        return {cx, cy, cz, cx + nx * (cy + ny * cz)};
    }

    CellIndex index_of_flat(int flat) const {
        const int cx = flat % nx;
        const int cy = (flat / nx) % ny;
        const int cz = flat / (nx * ny);
        return {cx, cy, cz, flat};
    }

    int bin_size(int flat) const { return cell_start[flat + 1] - cell_start[flat]; }
};

inline CellGrid build_grid(const Box& box, double r_c) {
    CellGrid g;
    g.box = box;
    g.nx = static_cast<int>(std::floor(box.L.x / r_c));
    g.ny = static_cast<int>(std::floor(box.L.y / r_c));
    g.nz = static_cast<int>(std::floor(box.L.z / r_c));
    if (g.nx < 3 || g.ny < 3 || g.nz < 3)
        throw std::invalid_argument(
            "build_grid: box must admit at least 3 cells per axis (L >= 3 r_c), got " +
            std::to_string(g.nx) + "x" + std::to_string(g.ny) + "x" + std::to_string(g.nz));
    g.cell_len = {box.L.x / g.nx, box.L.y / g.ny, box.L.z / g.nz};
    g.cell_start.assign(static_cast<std::size_t>(g.cell_count()) + 1, 0);
    return g;
}

// Counting sort of particles into cells; positions must be wrapped to [0, L).
inline void bin_particles(CellGrid& grid, const PhaseSpace& ps) {
    const int nc = grid.cell_count();
    const std::size_t n = ps.size();
    grid.cell_of.resize(n);
    grid.cell_particles.resize(n);
    grid.cell_start.assign(static_cast<std::size_t>(nc) + 1, 0);

    auto clamp_axis = [](double v, double len, int cells) {
        int c = static_cast<int>(std::floor(v / len));
        if (c >= cells) c = cells - 1;  // x == L - eps can round up
        if (c < 0) c = 0;
        return c;
    };

    for (std::size_t i = 0; i < n; ++i) {
        const Vec3& p = ps.positions[i];
        const int cx = clamp_axis(p.x, grid.cell_len.x, grid.nx);
        const int cy = clamp_axis(p.y, grid.cell_len.y, grid.ny);
        const int cz = clamp_axis(p.z, grid.cell_len.z, grid.nz);
        const int flat = cx + grid.nx * (cy + grid.ny * cz);
        grid.cell_of[i] = flat;
        ++grid.cell_start[flat + 1];
    }
    for (int c = 0; c < nc; ++c) grid.cell_start[c + 1] += grid.cell_start[c];
    std::vector<int> cursor(grid.cell_start.begin(), grid.cell_start.end() - 1);
    for (std::size_t i = 0; i < n; ++i)
        grid.cell_particles[cursor[grid.cell_of[i]]++] = static_cast<int>(i);
}

// Periodic neighbor lookup. The returned shift is the correction to add to
// the neighbor cell's particle positions so that distances relative to the
// base cell need no further minimum-image pass.
inline CellIndex neighbor(const CellIndex& ci, const CellOffset& o, const CellGrid& grid,
                          Vec3& shift) {
    int cx = ci.cx + o.dx;
    int cy = ci.cy + o.dy;
    int cz = ci.cz + o.dz;
    shift = Vec3{};
    if (cx < 0) { cx += grid.nx; shift.x = -grid.box.L.x; }
    else if (cx >= grid.nx) { cx -= grid.nx; shift.x = grid.box.L.x; }
    if (cy < 0) { cy += grid.ny; shift.y = -grid.box.L.y; }
    else if (cy >= grid.ny) { cy -= grid.ny; shift.y = grid.box.L.y; }
    if (cz < 0) { cz += grid.nz; shift.z = -grid.box.L.z; }
    else if (cz >= grid.nz) { cz -= grid.nz; shift.z = grid.box.L.z; }
    return grid.index(cx, cy, cz);
}

struct NeighborRef {
    CellIndex cell;
    Vec3 shift;
};

inline std::vector<NeighborRef> forward_neighbors(const CellIndex& ci, const CellGrid& grid) {
    std::vector<NeighborRef> out;
    out.reserve(kForwardOffsets.size());
    for (const auto& o : kForwardOffsets) {
        Vec3 shift;
        CellIndex cj = neighbor(ci, o, grid, shift);
        out.push_back({cj, shift});
    }
    return out;
}

} // namespace tricell
