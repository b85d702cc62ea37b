#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "tricell/execute.hpp"
#include "tricell/phase_space.hpp"
#include "tricell/random.hpp"

namespace tricell {

enum class ThermostatMode { None, Rescale };

struct Thermostat {
    ThermostatMode mode = ThermostatMode::None;
    double t_target = 0.0;
};

// First n sites of an m^3 simple cubic lattice, m = ceil(n^(1/3)), spacing
// L/m per axis, offset by half a spacing. Sites are enumerated x fastest.
inline std::vector<Vec3> init_lattice(std::size_t n, const Box& box) {
    std::vector<Vec3> pos;
    pos.reserve(n);
    if (n == 0) return pos;
    std::size_t m = static_cast<std::size_t>(std::ceil(std::cbrt(static_cast<double>(n))));
    while (m * m * m < n) ++m;  // guard against cbrt rounding
    const Vec3 spacing{box.L.x / static_cast<double>(m), box.L.y / static_cast<double>(m),
                       box.L.z / static_cast<double>(m)};
    for (std::size_t iz = 0; iz < m && pos.size() < n; ++iz)
        for (std::size_t iy = 0; iy < m && pos.size() < n; ++iy)
            for (std::size_t ix = 0; ix < m && pos.size() < n; ++ix) {
                if (pos.size() == n) break;
                pos.push_back({(static_cast<double>(ix) + 0.5) * spacing.x,
                               (static_cast<double>(iy) + 0.5) * spacing.y,
                               (static_cast<double>(iz) + 0.5) * spacing.z});
            }
    return pos;
}

inline void remove_net_momentum(PhaseSpace& ps) {
    const std::size_t n = ps.size();
    if (n == 0) return;
    Vec3 mean{};
    for (const auto& v : ps.velocities) mean += v;
    mean *= 1.0 / static_cast<double>(n);
    for (auto& v : ps.velocities) v -= mean;
}

// Multiplies velocities by sqrt(T_target / T_inst).
inline void rescale_thermostat(PhaseSpace& ps, double t_target, const Params& params) {
    const double ekin = kinetic_energy(ps, params);
    if (!(ekin > 0.0))
        throw std::domain_error("rescale_thermostat: zero kinetic energy");
    const double t_inst = 2.0 * ekin / (3.0 * static_cast<double>(ps.size()));
    const double factor = std::sqrt(t_target / t_inst);
    for (auto& v : ps.velocities) v *= factor;
}

// Maxwell-Boltzmann velocities at t_target: net momentum removed, then
// rescaled so the instantaneous temperature is exactly t_target.
inline void init_velocities(PhaseSpace& ps, double t_target, std::uint64_t seed,
                            const Params& params) {
    const std::size_t n = ps.size();
    if (n < 2) throw std::invalid_argument("init_velocities: need at least 2 particles");
    Rng rng(seed);
    const double sigma_v = std::sqrt(t_target / params.mass);
    for (auto& v : ps.velocities)
        v = {sigma_v * rng.normal(), sigma_v * rng.normal(), sigma_v * rng.normal()};
    remove_net_momentum(ps);
    rescale_thermostat(ps, t_target, params);
}

// One velocity-Verlet step. Forces must be consistent with the current
// positions on entry; on exit they match the new positions.
inline ExecResult step(PhaseSpace& ps, const Params& params, Engine& engine,
                       const Thermostat& thermostat = {}) {
    const double half_dt_over_m = 0.5 * params.dt / params.mass;
    for (std::size_t i = 0; i < ps.size(); ++i)
        ps.velocities[i] += ps.forces[i] * half_dt_over_m;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        ps.positions[i] += ps.velocities[i] * params.dt;
        ps.positions[i] = wrap_position(ps.positions[i], ps.box);
    }
    ExecResult res = engine.evaluate(ps, params);
    for (std::size_t i = 0; i < ps.size(); ++i)
        ps.velocities[i] += ps.forces[i] * half_dt_over_m;
    if (thermostat.mode == ThermostatMode::Rescale)
        rescale_thermostat(ps, thermostat.t_target, params);
    return res;
}

} // namespace tricell
