#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "tricell/execute.hpp"
#include "tricell/oracle.hpp"
#include "tricell/random.hpp"

using namespace tricell;

TEST_CASE("equilateral triplet reference values", "[oracle]") {
    Params params;
    params.nu = 0.072;
    params.cutoff_mode = Cutoff::Pair;
    PhaseSpace ps(3, Box(12.5, 12.5, 12.5));
    ps.positions[0] = {6.0, 6.0, 6.25};
    ps.positions[1] = {7.0, 6.0, 6.25};
    ps.positions[2] = {6.5, 6.0 + std::sqrt(3.0) / 2.0, 6.25};
    const auto r = oracle::brute_force(ps, params);
    CHECK(r.E3 == Catch::Approx(0.099).epsilon(1e-12));
    CHECK(r.accepted_triplets == 1);
    CHECK(norm(r.forces[0] + r.forces[1] + r.forces[2]) <= 1e-12);
}

TEST_CASE("four mutually close particles give C(4,3) triplets", "[oracle]") {
    Params params;
    PhaseSpace ps(4, Box(12.5, 12.5, 12.5));
    ps.positions[0] = {5.0, 5.0, 5.0};
    ps.positions[1] = {6.1, 5.0, 5.0};
    ps.positions[2] = {5.0, 6.2, 5.0};
    ps.positions[3] = {5.0, 5.0, 6.3};
    const auto r = oracle::brute_force(ps, params);
    CHECK(r.accepted_triplets == 4);
    CHECK(r.accepted_pairs == 6);
}

TEST_CASE("neighborhood limitation is inert under the pair cutoff", "[oracle]") {
    Params params;
    Rng rng(404);
    PhaseSpace ps(150, Box(12.5, 12.5, 12.5));
    for (auto& p : ps.positions)
        p = {rng.uniform(0, 12.5), rng.uniform(0, 12.5), rng.uniform(0, 12.5)};
    const auto full = oracle::brute_force(ps, params, false);
    const auto limited = oracle::brute_force(ps, params, true);
    CHECK(full.accepted_triplets == limited.accepted_triplets);
    CHECK(full.E3 == limited.E3);
    CHECK(full.W3 == limited.W3);
    for (std::size_t i = 0; i < ps.size(); ++i) {
        CHECK(full.forces[i].x == limited.forces[i].x);
        CHECK(full.forces[i].z == limited.forces[i].z);
    }
}

TEST_CASE("oracle self-consistency", "[oracle]") {
    Params params;
    Rng rng(405);
    PhaseSpace ps(120, Box(12.5, 12.5, 12.5));
    for (auto& p : ps.positions)
        p = {rng.uniform(0, 12.5), rng.uniform(0, 12.5), rng.uniform(0, 12.5)};
    const auto r = oracle::brute_force(ps, params);

    SECTION("W3 equals 9 E3 for the pure triple-dipole term") {
        CHECK(r.W3 == Catch::Approx(9.0 * r.E3).epsilon(1e-9));
    }

    SECTION("global force balance") {
        Vec3 net{};
        double scale = 1.0;
        for (const auto& f : r.forces) {
            net += f;
            scale = std::max(scale, norm(f));
        }
        CHECK(norm(net) <= 1e-12 * scale * static_cast<double>(ps.size()));
    }

    SECTION("E3 recomputed from the engine-recorded accepted set") {
        params.traversal = Traversal::C08;
        Engine engine(ps.box, params);
        std::vector<std::array<int, 3>> rec;
        ExecOptions opts;
        opts.record_accepted = &rec;
        PhaseSpace copy = ps;
        engine.evaluate(copy, params, opts);
        REQUIRE(rec.size() == r.accepted_triplets);
        double e3 = 0.0;
        for (const auto& t : rec) {
            const Vec3 dij = minimum_image(ps.positions[t[0]] - ps.positions[t[1]], ps.box);
            const Vec3 dik = minimum_image(ps.positions[t[0]] - ps.positions[t[2]], ps.box);
            const Vec3 djk = minimum_image(ps.positions[t[1]] - ps.positions[t[2]], ps.box);
            e3 += atm_energy(norm(dij), norm(dik), norm(djk), params.nu);
        }
        CHECK(e3 == Catch::Approx(r.E3).epsilon(1e-11));
    }
}

TEST_CASE("oracle guardrail", "[oracle]") {
    Params params;
    PhaseSpace ps(2001, Box(50, 50, 50));
    CHECK_THROWS_AS(oracle::brute_force(ps, params), std::invalid_argument);
}
