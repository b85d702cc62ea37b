#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>

#include "tricell/phase_space.hpp"
#include "tricell/random.hpp"
#include "tricell/snapshot.hpp"
#include "tricell/vec3.hpp"

using namespace tricell;

TEST_CASE("minimum image maps into [-L/2, L/2)", "[core]") {
    const Box box(10.0, 10.0, 10.0);
    SECTION("identity") {
        const Vec3 r = minimum_image({0, 0, 0}, box);
        CHECK(r.x == 0.0);
        CHECK(r.y == 0.0);
        CHECK(r.z == 0.0);
    }
    SECTION("single wrap") {
        const Vec3 r = minimum_image({9, 0, 0}, box);
        CHECK(r.x == Catch::Approx(-1.0).margin(1e-14));
    }
    SECTION("half-box tie goes to -L/2") {
        const Vec3 r = minimum_image({5, 5, 5}, box);
        CHECK(r.x == -5.0);
        CHECK(r.y == -5.0);
        CHECK(r.z == -5.0);
        const Vec3 s = minimum_image({-5, -5, -5}, box);
        CHECK(s.x == -5.0);
    }
}

TEST_CASE("wrap position maps into [0, L)", "[core]") {
    const Box box(12.5, 12.5, 12.5);
    CHECK(wrap_position({12.6, 0, 0}, box).x == Catch::Approx(0.1).margin(1e-12));
    CHECK(wrap_position({-0.1, 0, 0}, box).x == Catch::Approx(12.4).margin(1e-12));
    const Vec3 inside = wrap_position({3, 3, 3}, box);
    CHECK(inside.x == 3.0);
    CHECK(inside.y == 3.0);
    CHECK(inside.z == 3.0);
    // boundary stays strictly below L
    CHECK(wrap_position({12.5, 0, 0}, box).x == 0.0);
    CHECK(wrap_position({-1e-18, 0, 0}, box).x < 12.5);
    CHECK(wrap_position({-1e-18, 0, 0}, box).x >= 0.0);
}

TEST_CASE("geometry properties", "[core]") {
    Rng rng(42);
    const Box box(12.5, 9.0, 17.5);
    for (int trial = 0; trial < 200; ++trial) {
        const Vec3 dr{rng.uniform(-40, 40), rng.uniform(-40, 40), rng.uniform(-40, 40)};
        const Vec3 once = minimum_image(dr, box);
        const Vec3 twice = minimum_image(once, box);
        CHECK(once.x == twice.x);
        CHECK(once.y == twice.y);
        CHECK(once.z == twice.z);
        CHECK(norm(once) <= norm(dr) + 1e-12);
        CHECK(once.x >= -box.L.x / 2);
        CHECK(once.x < box.L.x / 2);

        // pair differences are invariant under adding L to either particle
        const Vec3 a{rng.uniform(0, box.L.x), rng.uniform(0, box.L.y), rng.uniform(0, box.L.z)};
        const Vec3 b{rng.uniform(0, box.L.x), rng.uniform(0, box.L.y), rng.uniform(0, box.L.z)};
        const Vec3 d0 = minimum_image(wrap_position(a, box) - wrap_position(b, box), box);
        const Vec3 shifted{a.x + box.L.x, a.y, a.z};
        const Vec3 d1 = minimum_image(wrap_position(shifted, box) - wrap_position(b, box), box);
        CHECK(d0.x == Catch::Approx(d1.x).margin(1e-12));
        CHECK(d0.y == Catch::Approx(d1.y).margin(1e-12));
        CHECK(d0.z == Catch::Approx(d1.z).margin(1e-12));
    }
}

TEST_CASE("box validation", "[core]") {
    CHECK_THROWS_AS(Box(0.0, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(Box(1.0, -1.0, 1.0), std::invalid_argument);
}

TEST_CASE("phase space helpers", "[core]") {
    Params params;
    PhaseSpace ps(2, Box(10, 10, 10));
    ps.velocities[0] = {1, 0, 0};
    ps.velocities[1] = {-1, 0, 0};
    CHECK(kinetic_energy(ps, params) == Catch::Approx(1.0));
    CHECK(instantaneous_temperature(ps, params) == Catch::Approx(2.0 / 6.0));
    const Vec3 p = total_momentum(ps, params);
    CHECK(p.x == 0.0);
}

TEST_CASE("snapshot round trip is exact", "[core]") {
    Rng rng(7);
    PhaseSpace ps(17, Box(12.5, 12.5, 75.0));
    for (auto& p : ps.positions)
        p = {rng.uniform(0, 12.5), rng.uniform(0, 12.5), rng.uniform(0, 75.0)};
    for (auto& v : ps.velocities)
        v = {rng.normal(), rng.normal(), rng.normal()};

    const std::string path = "snapshot_roundtrip_test.txt";
    write_snapshot(ps, path);
    const PhaseSpace back = read_snapshot(path);
    REQUIRE(back.size() == ps.size());
    CHECK(back.box.L.x == ps.box.L.x);
    CHECK(back.box.L.z == ps.box.L.z);
    for (std::size_t i = 0; i < ps.size(); ++i) {
        CHECK(back.positions[i].x == ps.positions[i].x);
        CHECK(back.positions[i].y == ps.positions[i].y);
        CHECK(back.positions[i].z == ps.positions[i].z);
        CHECK(back.velocities[i].x == ps.velocities[i].x);
    }
    std::filesystem::remove(path);
}
