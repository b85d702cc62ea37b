#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tricell/params.hpp"
#include "tricell/vec3.hpp"

namespace tricell {

// Distances below this are treated as coincident particles.
inline constexpr double kMinDistance = 1e-12;
inline constexpr double kMinDistance2 = 1e-24;

// Triangle of a molecular triplet. Unit vectors follow e_ab = (r_a - r_b)/r_ab.
struct TripletGeometry {
    double r_ij, r_ik, r_jk;
    Vec3 e_ij, e_ik, e_jk;
};

// Forces of one triplet, plus the three primitive pair-forces they are
// assembled from: F_i = F_i_j_k + F_i_k_j, F_j = -F_i_j_k + F_j_k_i,
// F_k = -F_i_k_j - F_j_k_i.
struct ForceTriple {
    Vec3 F_i, F_j, F_k;
    Vec3 F_i_j_k, F_i_k_j, F_j_k_i;
};

// Truncated, unshifted Lennard-Jones. Returns potential and the scalar f such
// that the force on i from j is f * (r_i - r_j).
inline void lj_energy_force(double r2, const Params& params, double& u2, double& f_over_r) {
    if (r2 < kMinDistance2)
        throw std::domain_error("lj_energy_force: coincident particles");
    const double s2 = params.sigma * params.sigma / r2;
    const double s6 = s2 * s2 * s2;
    u2 = 4.0 * params.epsilon * s6 * (s6 - 1.0);
    f_over_r = 24.0 * params.epsilon * s6 * (2.0 * s6 - 1.0) / r2;
}

// Cutoff predicates on squared distances; boundary values are accepted.
inline bool cutoff_accept_r2(double r2ij, double r2ik, double r2jk, double rc2, double rc6,
                             Cutoff mode) {
    if (mode == Cutoff::Pair)
        return r2ij <= rc2 && r2ik <= rc2 && r2jk <= rc2;
    return r2ij * r2ik * r2jk <= rc6;
}

inline bool cutoff_accept(const TripletGeometry& g, double r_c, Cutoff mode) {
    const double rc2 = r_c * r_c;
    return cutoff_accept_r2(g.r_ij * g.r_ij, g.r_ik * g.r_ik, g.r_jk * g.r_jk, rc2,
                            rc2 * rc2 * rc2, mode);
}

namespace detail {

// ATM potential and force prefactors in squared-distance variables
// x = r_ij^2, y = r_ik^2, z = r_jk^2. With P = -x+y+z, Q = x-y+z, R = x+y-z:
//   u = nu * [ (xyz)^(-3/2) + (3/8) P Q R (xyz)^(-5/2) ]
// The prefactors g satisfy F_i = g_ij*(r_i - r_j) + g_ik*(r_i - r_k), i.e.
// g_ab = -(du/dr_ab)/r_ab = -2 du/d(r_ab^2).
struct AtmEval {
    double u;
    double g_ij, g_ik, g_jk;
};

inline AtmEval atm_eval_r2(double x, double y, double z, double nu) {
    const double p = -x + y + z;
    const double q = x - y + z;
    const double r = x + y - z;
    const double pqr = p * q * r;
    const double s2 = 1.0 / (x * y * z);
    const double s = std::sqrt(s2);
    const double s3 = s * s2;
    const double s5 = s3 * s2;
    const double s7 = s5 * s2;

    AtmEval out;
    out.u = nu * (s3 + 0.375 * pqr * s5);
    const double c5 = 0.375 * s5;
    const double c7 = 0.9375 * pqr * s7;
    // du/dx etc., then g = -2 du/d(squared distance)
    const double du_dx = -1.5 * y * z * s5 + c5 * (p * q + p * r - q * r) - c7 * y * z;
    const double du_dy = -1.5 * x * z * s5 + c5 * (p * q + q * r - p * r) - c7 * x * z;
    const double du_dz = -1.5 * x * y * s5 + c5 * (p * r + q * r - p * q) - c7 * x * y;
    out.g_ij = -2.0 * nu * du_dx;
    out.g_ik = -2.0 * nu * du_dy;
    out.g_jk = -2.0 * nu * du_dz;
    return out;
}

inline void require_positive_distances(double r_ij, double r_ik, double r_jk) {
    if (r_ij < kMinDistance || r_ik < kMinDistance || r_jk < kMinDistance)
        throw std::domain_error("ATM kernel: coincident particles");
}

} // namespace detail

// Axilrod-Teller-Muto potential with the angle dependence removed via the law
// of cosines. Symmetric under any relabeling of (i, j, k).
inline double atm_energy(double r_ij, double r_ik, double r_jk, double nu) {
    detail::require_positive_distances(r_ij, r_ik, r_jk);
    return detail::atm_eval_r2(r_ij * r_ij, r_ik * r_ik, r_jk * r_jk, nu).u;
}

// Scalar partial derivatives of atm_energy with respect to the three
// distances, in the order (d/dr_ij, d/dr_ik, d/dr_jk).
inline void atm_gradient(double r_ij, double r_ik, double r_jk, double nu, double& du_drij,
                         double& du_drik, double& du_drjk) {
    detail::require_positive_distances(r_ij, r_ik, r_jk);
    const auto ev = detail::atm_eval_r2(r_ij * r_ij, r_ik * r_ik, r_jk * r_jk, nu);
    du_drij = -ev.g_ij * r_ij;
    du_drik = -ev.g_ik * r_ik;
    du_drjk = -ev.g_jk * r_jk;
}

// Full triplet force evaluation from wrapped positions; displacements are
// reduced with the minimum image convention per pair.
inline double force_triple(const Vec3& p_i, const Vec3& p_j, const Vec3& p_k, const Box& box,
                           const Params& params, ForceTriple& ft) {
    const Vec3 d_ij = minimum_image(p_i - p_j, box);
    const Vec3 d_ik = minimum_image(p_i - p_k, box);
    const Vec3 d_jk = minimum_image(p_j - p_k, box);
    const double x = norm2(d_ij);
    const double y = norm2(d_ik);
    const double z = norm2(d_jk);
    if (x < kMinDistance2 || y < kMinDistance2 || z < kMinDistance2)
        throw std::domain_error("force_triple: coincident particles");
    const auto ev = detail::atm_eval_r2(x, y, z, params.nu);
    ft.F_i_j_k = d_ij * ev.g_ij;
    ft.F_i_k_j = d_ik * ev.g_ik;
    ft.F_j_k_i = d_jk * ev.g_jk;
    ft.F_i = ft.F_i_j_k + ft.F_i_k_j;
    ft.F_j = -ft.F_i_j_k + ft.F_j_k_i;
    ft.F_k = -ft.F_i_k_j - ft.F_j_k_i;
    return ev.u;
}

} // namespace tricell
