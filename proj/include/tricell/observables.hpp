#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "tricell/phase_space.hpp"
#include "tricell/potentials.hpp"

namespace tricell {

inline constexpr int kHistogramBins = 600;

struct ThermoSample {
    long step;
    double E2_per_N, E3_per_N, Ekin_per_N;
    double T_inst, P;
    double W2, W3;
};

struct Histogram {
    double lo = 0.0, hi = 1.0;
    std::vector<double> counts;
    long samples = 0;

    Histogram() = default;
    Histogram(double lo_, double hi_, int bins = kHistogramBins)
        : lo(lo_), hi(hi_), counts(static_cast<std::size_t>(bins), 0.0) {
        if (!(hi > lo) || bins <= 0)
            throw std::invalid_argument("Histogram: invalid range or bin count");
    }

    int bins() const { return static_cast<int>(counts.size()); }
    double bin_width() const { return (hi - lo) / bins(); }
    double center(int b) const { return lo + (b + 0.5) * bin_width(); }

    void add(double v, double weight = 1.0) {
        if (v < lo || v >= hi) return;
        int b = static_cast<int>((v - lo) / bin_width());
        if (b >= bins()) b = bins() - 1;
        counts[static_cast<std::size_t>(b)] += weight;
    }
};

// Standard truncated-LJ tail corrections for a homogeneous fluid
// (epsilon = sigma = 1):
//   E_tail/N = (8/3) pi rho [ (1/3) r_c^-9 - r_c^-3 ]
//   P_tail   = (16/3) pi rho^2 [ (2/3) r_c^-9 - r_c^-3 ]
inline void lrc_homogeneous(double rho, double r_c, double& e_tail_per_n, double& p_tail) {
    const double pi = 3.14159265358979323846;
    const double rc3 = 1.0 / (r_c * r_c * r_c);
    const double rc9 = rc3 * rc3 * rc3;
    e_tail_per_n = (8.0 / 3.0) * pi * rho * (rc9 / 3.0 - rc3);
    p_tail = (16.0 / 3.0) * pi * rho * rho * (2.0 / 3.0 * rc9 - rc3);
}

// P = rho T + (W2 + W3) / (3V) (+ tail). Works for instantaneous values and
// for production means alike.
inline double pressure(double rho, double temperature, double w2, double w3, double volume,
                       double p_tail = 0.0) {
    if (!(volume > 0.0)) throw std::invalid_argument("pressure: volume must be positive");
    return rho * temperature + (w2 + w3) / (3.0 * volume) + p_tail;
}

// RDF accumulation counts ordered pairs (+2 per unordered pair) so that
// g(r) = count / (N * shell_volume * rho * samples) normalizes to 1 for an
// ideal gas.
inline void rdf_accumulate(const PhaseSpace& ps, Histogram& hist) {
    const std::size_t n = ps.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double r =
                norm(minimum_image(ps.positions[i] - ps.positions[j], ps.box));
            hist.add(r, 2.0);
        }
    ++hist.samples;
}

struct TablePoint {
    double x, y;
};

inline std::vector<TablePoint> rdf_finalize(const Histogram& hist, double rho, std::size_t n) {
    std::vector<TablePoint> out;
    out.reserve(static_cast<std::size_t>(hist.bins()));
    const double pi = 3.14159265358979323846;
    for (int b = 0; b < hist.bins(); ++b) {
        const double r_in = hist.lo + b * hist.bin_width();
        const double r_out = r_in + hist.bin_width();
        const double shell = 4.0 / 3.0 * pi * (r_out * r_out * r_out - r_in * r_in * r_in);
        const double denom =
            static_cast<double>(n) * shell * rho * static_cast<double>(hist.samples);
        out.push_back({hist.center(b), denom > 0.0 ? hist.counts[b] / denom : 0.0});
    }
    return out;
}

// Density profile over z; per-bin density = counts / (bin volume * samples).
inline void density_profile_accumulate(const PhaseSpace& ps, Histogram& hist) {
    for (const auto& p : ps.positions) hist.add(p.z);
    ++hist.samples;
}

inline std::vector<TablePoint> density_profile_finalize(const Histogram& hist, const Box& box) {
    std::vector<TablePoint> out;
    out.reserve(static_cast<std::size_t>(hist.bins()));
    const double bin_volume = box.L.x * box.L.y * hist.bin_width();
    for (int b = 0; b < hist.bins(); ++b) {
        const double denom = bin_volume * static_cast<double>(hist.samples);
        out.push_back({hist.center(b), denom > 0.0 ? hist.counts[b] / denom : 0.0});
    }
    return out;
}

enum class InterfaceSide { Left, Right };

struct InterfaceFit {
    double rho_l = 0.0, rho_g = 0.0;
    double z0 = 0.0, d = 1.0;
    InterfaceSide side = InterfaceSide::Right;
    double residual = 0.0;
    int iterations = 0;
};

// Least-squares fit of the interface profile
//   rho(z) = (rho_l + rho_g)/2 - (rho_l - rho_g)/2 * tanh(2 (z - z0)/d)
// on the right flank; the left flank uses the mirrored argument so that the
// liquid side is consistent. Gauss-Newton with step halving, initialized from
// the 10% extreme-bin means, the half-density crossing, and d = 1.
inline InterfaceFit fit_interface(const std::vector<TablePoint>& profile, InterfaceSide side,
                                  int max_iterations = 200) {
    const std::size_t m = profile.size();
    if (m < 8) throw std::invalid_argument("fit_interface: too few profile points");
    const double sgn = (side == InterfaceSide::Right) ? 1.0 : -1.0;

    // initialization
    const std::size_t tail = std::max<std::size_t>(1, m / 10);
    double lo_mean = 0.0, hi_mean = 0.0;
    for (std::size_t i = 0; i < tail; ++i) lo_mean += profile[i].y;
    for (std::size_t i = m - tail; i < m; ++i) hi_mean += profile[i].y;
    lo_mean /= static_cast<double>(tail);
    hi_mean /= static_cast<double>(tail);
    double rho_l = std::max(lo_mean, hi_mean);
    double rho_g = std::min(lo_mean, hi_mean);
    double half = 0.5 * (rho_l + rho_g);
    double z0 = profile[m / 2].x;
    for (std::size_t i = 0; i + 1 < m; ++i) {
        const bool crosses = (profile[i].y - half) * (profile[i + 1].y - half) <= 0.0;
        if (crosses) {
            z0 = 0.5 * (profile[i].x + profile[i + 1].x);
            break;
        }
    }
    double d = 1.0;

    auto residual_sq = [&](double rl, double rg, double zz, double dd) {
        double s = 0.0;
        for (const auto& p : profile) {
            const double t = std::tanh(sgn * 2.0 * (p.x - zz) / dd);
            const double r = 0.5 * (rl + rg) - 0.5 * (rl - rg) * t - p.y;
            s += r * r;
        }
        return s;
    };

    double cur = residual_sq(rho_l, rho_g, z0, d);
    InterfaceFit fit;
    fit.side = side;
    int it = 0;
    for (; it < max_iterations; ++it) {
        // normal equations for the 4-parameter Jacobian
        double jtj[4][4] = {};
        double jtr[4] = {};
        for (const auto& p : profile) {
            const double arg = sgn * 2.0 * (p.x - z0) / d;
            const double t = std::tanh(arg);
            const double sech2 = 1.0 - t * t;
            const double model = 0.5 * (rho_l + rho_g) - 0.5 * (rho_l - rho_g) * t;
            const double r = model - p.y;
            const double j[4] = {
                0.5 * (1.0 - t),                                   // d/d rho_l
                0.5 * (1.0 + t),                                   // d/d rho_g
                0.5 * (rho_l - rho_g) * sech2 * sgn * 2.0 / d,     // d/d z0
                0.5 * (rho_l - rho_g) * sech2 * arg / d,           // d/d d
            };
            for (int a = 0; a < 4; ++a) {
                jtr[a] += j[a] * r;
                for (int b = 0; b < 4; ++b) jtj[a][b] += j[a] * j[b];
            }
        }
        // solve (J^T J) s = J^T r with partial pivoting
        double A[4][5];
        for (int a = 0; a < 4; ++a) {
            for (int b = 0; b < 4; ++b) A[a][b] = jtj[a][b];
            A[a][4] = jtr[a];
        }
        for (int col = 0; col < 4; ++col) {
            int piv = col;
            for (int rw = col + 1; rw < 4; ++rw)
                if (std::fabs(A[rw][col]) > std::fabs(A[piv][col])) piv = rw;
            if (std::fabs(A[piv][col]) < 1e-300)
                throw std::runtime_error("fit_interface: singular normal equations");
            std::swap(A[col], A[piv]);
            for (int rw = col + 1; rw < 4; ++rw) {
                const double fac = A[rw][col] / A[col][col];
                for (int cc = col; cc < 5; ++cc) A[rw][cc] -= fac * A[col][cc];
            }
        }
        double stepv[4];
        for (int a = 3; a >= 0; --a) {
            double s = A[a][4];
            for (int b = a + 1; b < 4; ++b) s -= A[a][b] * stepv[b];
            stepv[a] = s / A[a][a];
        }
        // step halving
        double lambda = 1.0;
        double next = cur;
        double nrl = rho_l, nrg = rho_g, nz0 = z0, nd = d;
        bool improved = false;
        for (int h = 0; h < 30; ++h) {
            const double trl = rho_l - lambda * stepv[0];
            const double trg = rho_g - lambda * stepv[1];
            const double tz0 = z0 - lambda * stepv[2];
            double td = d - lambda * stepv[3];
            if (td <= 1e-6) td = 1e-6;
            const double r = residual_sq(trl, trg, tz0, td);
            if (r < cur) {
                nrl = trl; nrg = trg; nz0 = tz0; nd = td;
                next = r;
                improved = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!improved) break;
        const double delta = cur - next;
        rho_l = nrl; rho_g = nrg; z0 = nz0; d = nd;
        cur = next;
        if (delta < 1e-16 * (1.0 + cur)) break;
    }
    if (it >= max_iterations)
        throw std::runtime_error("fit_interface: no convergence after " +
                                 std::to_string(max_iterations) +
                                 " iterations, residual " + std::to_string(cur));
    fit.rho_l = rho_l;
    fit.rho_g = rho_g;
    fit.z0 = z0;
    fit.d = std::fabs(d);
    fit.residual = cur;
    fit.iterations = it;
    return fit;
}

} // namespace tricell
