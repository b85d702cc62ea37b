#pragma once

#include <cstddef>
#include <vector>

#include "tricell/params.hpp"
#include "tricell/vec3.hpp"

namespace tricell {

// Mutable simulation state. Positions are kept wrapped into [0, L).
struct PhaseSpace {
    std::vector<Vec3> positions;
    std::vector<Vec3> velocities;
    std::vector<Vec3> forces;
    Box box;

    PhaseSpace() = default;
    PhaseSpace(std::size_t n, const Box& b)
        : positions(n), velocities(n), forces(n), box(b) {}

    std::size_t size() const { return positions.size(); }

    void zero_forces() {
        for (auto& f : forces) f = Vec3{};
    }

    void wrap_all() {
        for (auto& p : positions) p = wrap_position(p, box);
    }
};

inline double kinetic_energy(const PhaseSpace& ps, const Params& params) {
    double sum = 0.0;
    for (const auto& v : ps.velocities) sum += norm2(v);
    return 0.5 * params.mass * sum;
}

// T = 2 E_kin / (3N), no constraint correction.
inline double instantaneous_temperature(const PhaseSpace& ps, const Params& params) {
    if (ps.size() == 0) return 0.0;
    return 2.0 * kinetic_energy(ps, params) / (3.0 * static_cast<double>(ps.size()));
}

inline Vec3 total_momentum(const PhaseSpace& ps, const Params& params) {
    Vec3 p{};
    for (const auto& v : ps.velocities) p += v;
    return p * params.mass;
}

inline Vec3 total_force(const PhaseSpace& ps) {
    Vec3 f{};
    for (const auto& fi : ps.forces) f += fi;
    return f;
}

} // namespace tricell
