#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "tricell/execute.hpp"
#include "tricell/observables.hpp"
#include "tricell/random.hpp"

using namespace tricell;

namespace {

// Simpson quadrature of int_rc^inf f(r) dr via the substitution t = rc/r,
// which maps the tail onto the finite interval (0, 1].
double tail_quadrature(double (*f)(double, double), double rc, double rho, int n = 100000) {
    auto g = [&](double t) {
        if (t <= 0.0) return 0.0;
        const double r = rc / t;
        return f(r, rho) * rc / (t * t);
    };
    const double h = 1.0 / n;
    double s = g(0.0) + g(1.0);
    for (int i = 1; i < n; ++i) s += g(i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

double e_tail_integrand(double r, double rho) {
    const double inv6 = 1.0 / std::pow(r, 6.0);
    const double u = 4.0 * (inv6 * inv6 - inv6);
    const double pi = 3.14159265358979323846;
    return 0.5 * rho * 4.0 * pi * r * r * u;
}

double p_tail_integrand(double r, double rho) {
    const double inv6 = 1.0 / std::pow(r, 6.0);
    const double dudr = (-48.0 * inv6 * inv6 + 24.0 * inv6) / r;
    const double pi = 3.14159265358979323846;
    return -(2.0 * pi / 3.0) * rho * rho * dudr * r * r * r;
}

} // namespace

TEST_CASE("pressure", "[observables]") {
    SECTION("ideal gas") { CHECK(pressure(0.5, 2.0, 0.0, 0.0, 100.0) == Catch::Approx(1.0)); }
    SECTION("single equilateral triplet virial") {
        Params params;
        params.nu = 0.072;
        PhaseSpace ps(3, Box(12.5, 12.5, 12.5));
        ps.positions[0] = {6.0, 6.0, 6.25};
        ps.positions[1] = {7.0, 6.0, 6.25};
        ps.positions[2] = {6.5, 6.0 + std::sqrt(3.0) / 2.0, 6.25};
        Engine engine(ps.box, params);
        const ExecResult r = engine.evaluate(ps, params);
        CHECK(r.W3 == Catch::Approx(0.891).epsilon(1e-10));  // 9 * 0.099
    }
    SECTION("volume must be positive") {
        CHECK_THROWS_AS(pressure(1, 1, 0, 0, 0.0), std::invalid_argument);
    }
}

TEST_CASE("homogeneous long-range corrections", "[observables]") {
    double e, p;
    SECTION("zero density") {
        lrc_homogeneous(0.0, 2.5, e, p);
        CHECK(e == 0.0);
        CHECK(p == 0.0);
    }
    SECTION("closed form against quadrature") {
        for (double rho : {0.2, 0.65, 0.817})
            for (double rc : {2.0, 2.5, 3.5}) {
                lrc_homogeneous(rho, rc, e, p);
                const double e_ref = tail_quadrature(e_tail_integrand, rc, rho);
                const double p_ref = tail_quadrature(p_tail_integrand, rc, rho);
                CHECK(e == Catch::Approx(e_ref).epsilon(1e-8));
                CHECK(p == Catch::Approx(p_ref).epsilon(1e-8));
            }
    }
    SECTION("frozen value at the single-phase state") {
        lrc_homogeneous(0.65, 2.5, e, p);
        CHECK(e == Catch::Approx(-0.34803152).epsilon(1e-6));
        CHECK(p == Catch::Approx(-0.45182).epsilon(1e-4));
    }
    SECTION("scaling in density") {
        double e1, p1, e2, p2;
        lrc_homogeneous(0.3, 2.5, e1, p1);
        lrc_homogeneous(0.6, 2.5, e2, p2);
        CHECK(e2 == Catch::Approx(2.0 * e1).epsilon(1e-13));
        CHECK(p2 == Catch::Approx(4.0 * p1).epsilon(1e-13));
    }
}

TEST_CASE("radial distribution function", "[observables]") {
    SECTION("two particles, one sample, one bin") {
        PhaseSpace ps(2, Box(10, 10, 10));
        ps.positions[0] = {2, 5, 5};
        ps.positions[1] = {4.3, 5, 5};
        Histogram h(0.0, 5.0);
        rdf_accumulate(ps, h);
        int nonzero = 0, hot = -1;
        for (int b = 0; b < h.bins(); ++b)
            if (h.counts[b] > 0) {
                ++nonzero;
                hot = b;
            }
        CHECK(nonzero == 1);
        CHECK(h.center(hot) == Catch::Approx(2.3).margin(h.bin_width()));
    }
    SECTION("ideal gas normalizes to one") {
        Rng rng(17);
        const double L = 10.0;
        Histogram h(0.0, L / 2);
        const std::size_t n = 800;
        const int samples = 40;
        PhaseSpace ps(n, Box(L, L, L));
        for (int s = 0; s < samples; ++s) {
            for (auto& p : ps.positions)
                p = {rng.uniform(0, L), rng.uniform(0, L), rng.uniform(0, L)};
            rdf_accumulate(ps, h);
        }
        const auto g = rdf_finalize(h, n / (L * L * L), n);
        double worst = 0.0;
        for (const auto& pt : g)
            if (pt.x > 1.0) worst = std::max(worst, std::fabs(pt.y - 1.0));
        CHECK(worst <= 0.15);  // statistical
        double mean = 0.0;
        int count = 0;
        for (const auto& pt : g)
            if (pt.x > 1.0) {
                mean += pt.y;
                ++count;
            }
        CHECK(mean / count == Catch::Approx(1.0).margin(0.01));
    }
}

TEST_CASE("density profile", "[observables]") {
    const Box box(10, 10, 20);
    SECTION("counting identity: sum over bins recovers N") {
        Rng rng(23);
        PhaseSpace ps(500, box);
        for (auto& p : ps.positions)
            p = {rng.uniform(0, 10), rng.uniform(0, 10), rng.uniform(0, 20)};
        Histogram h(0.0, box.L.z);
        density_profile_accumulate(ps, h);
        const auto prof = density_profile_finalize(h, box);
        double total = 0.0;
        const double bin_volume = box.L.x * box.L.y * h.bin_width();
        for (const auto& pt : prof) total += pt.y * bin_volume;
        CHECK(total == Catch::Approx(500.0).epsilon(1e-12));
    }
    SECTION("slab occupies only its bins") {
        PhaseSpace ps(200, box);
        Rng rng(29);
        for (auto& p : ps.positions)
            p = {rng.uniform(0, 10), rng.uniform(0, 10), rng.uniform(8.0, 12.0)};
        Histogram h(0.0, box.L.z);
        density_profile_accumulate(ps, h);
        const auto prof = density_profile_finalize(h, box);
        for (const auto& pt : prof) {
            if (pt.x < 7.9 || pt.x > 12.1) CHECK(pt.y == 0.0);
        }
    }
}

TEST_CASE("interface fitting", "[observables]") {
    auto make_profile = [](double rho_l, double rho_g, double z0, double d, double lo,
                           double hi, int bins, double sgn) {
        std::vector<TablePoint> prof;
        for (int b = 0; b < bins; ++b) {
            const double z = lo + (b + 0.5) * (hi - lo) / bins;
            prof.push_back(
                {z, 0.5 * (rho_l + rho_g) - 0.5 * (rho_l - rho_g) * std::tanh(sgn * 2.0 * (z - z0) / d)});
        }
        return prof;
    };

    SECTION("noiseless right-interface round trip") {
        const auto prof = make_profile(0.7, 0.017, 20.5, 1.37, 0.0, 37.5, 300, 1.0);
        const auto fit = fit_interface(prof, InterfaceSide::Right);
        CHECK(fit.rho_l == Catch::Approx(0.7).epsilon(1e-8));
        CHECK(fit.rho_g == Catch::Approx(0.017).epsilon(1e-8));
        CHECK(fit.z0 == Catch::Approx(20.5).epsilon(1e-8));
        CHECK(fit.d == Catch::Approx(1.37).epsilon(1e-8));
    }
    SECTION("noiseless left-interface round trip") {
        const auto prof = make_profile(0.7, 0.017, 20.5, 1.37, 0.0, 37.5, 300, -1.0);
        const auto fit = fit_interface(prof, InterfaceSide::Left);
        CHECK(fit.rho_l == Catch::Approx(0.7).epsilon(1e-8));
        CHECK(fit.rho_g == Catch::Approx(0.017).epsilon(1e-8));
        CHECK(fit.z0 == Catch::Approx(20.5).epsilon(1e-8));
        CHECK(fit.d == Catch::Approx(1.37).epsilon(1e-8));
    }
    SECTION("one percent noise recovered within two percent") {
        // the fitted parameters are statistical estimators: require the 2%
        // recovery for at least 90% of draws and 4% always
        Rng rng(31);
        int within = 0;
        const int trials = 50;
        for (int trial = 0; trial < trials; ++trial) {
            auto prof = make_profile(0.7, 0.017, 20.5, 1.37, 0.0, 37.5, 300, 1.0);
            for (auto& p : prof) p.y += 0.01 * p.y * rng.normal();
            const auto fit = fit_interface(prof, InterfaceSide::Right);
            const double errs[4] = {
                std::fabs(fit.rho_l / 0.7 - 1.0), std::fabs(fit.rho_g / 0.017 - 1.0),
                std::fabs(fit.z0 / 20.5 - 1.0), std::fabs(fit.d / 1.37 - 1.0)};
            double worst = 0.0;
            for (double e2 : errs) worst = std::max(worst, e2);
            CHECK(worst <= 0.04);
            if (worst <= 0.02) ++within;
        }
        CHECK(within >= trials * 9 / 10);
    }
    SECTION("degenerate data reports an error") {
        std::vector<TablePoint> flat;
        for (int b = 0; b < 100; ++b) flat.push_back({b * 0.1, 0.5});
        CHECK_THROWS(fit_interface(flat, InterfaceSide::Right));
    }
}
