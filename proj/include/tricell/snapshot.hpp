#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "tricell/phase_space.hpp"

namespace tricell {

// Plain-text snapshot: header "N Lx Ly Lz", then one "x y z vx vy vz" line
// per particle, 17 significant digits.
inline void write_snapshot(const PhaseSpace& ps, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open snapshot file for writing: " + path);
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%zu %.17g %.17g %.17g\n", ps.size(), ps.box.L.x,
                  ps.box.L.y, ps.box.L.z);
    out << buf;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        const Vec3& p = ps.positions[i];
        const Vec3& v = ps.velocities[i];
        std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g %.17g %.17g %.17g\n", p.x, p.y, p.z,
                      v.x, v.y, v.z);
        out << buf;
    }
    if (!out) throw std::runtime_error("snapshot write failed: " + path);
}

inline PhaseSpace read_snapshot(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open snapshot file: " + path);
    std::size_t n = 0;
    double lx, ly, lz;
    if (!(in >> n >> lx >> ly >> lz))
        throw std::runtime_error("snapshot header parse error: " + path);
    PhaseSpace ps(n, Box(lx, ly, lz));
    for (std::size_t i = 0; i < n; ++i) {
        Vec3& p = ps.positions[i];
        Vec3& v = ps.velocities[i];
        if (!(in >> p.x >> p.y >> p.z >> v.x >> v.y >> v.z))
            throw std::runtime_error("snapshot body parse error at particle " +
                                     std::to_string(i) + ": " + path);
    }
    return ps;
}

} // namespace tricell
