#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <set>

#include "tricell/coverage.hpp"
#include "tricell/schedule.hpp"

using namespace tricell;

namespace {
CellGrid grid_cells(int n) { return build_grid(Box(2.5 * n, 2.5 * n, 2.5 * n), 2.5); }
}

TEST_CASE("3c01 schedule structure", "[schedule]") {
    const CellGrid g = grid_cells(5);
    const auto s = make_schedule(Traversal::C01, g);
    CHECK_FALSE(s.newton);
    REQUIRE(s.colors.size() == 1);
    CHECK(s.colors[0].size() == 125);

    const CellTask& t = s.colors[0][7];
    CHECK(t.slots.size() == 27);
    CHECK(t.pairs.size() == 27);
    // all unordered neighborhood combinations except the base-base one,
    // which the singles routine owns
    CHECK(t.triples.size() == 27 * 28 / 2 - 1);
    CHECK(t.triples.size() == 351 + 26);

    std::set<std::pair<int, int>> combos;
    for (const auto& tr : t.triples) {
        CHECK(tr.a == 0);
        combos.insert({tr.b, tr.c});
    }
    CHECK(combos.size() == t.triples.size());

    // distinct cells in every slot
    std::set<int> cells;
    for (const auto& sl : t.slots) cells.insert(sl.cell);
    CHECK(cells.size() == 27);
}

TEST_CASE("3c18 schedule structure", "[schedule]") {
    const CellGrid g = grid_cells(6);
    const auto s = make_schedule(Traversal::C18, g);
    CHECK(s.newton);
    CHECK(s.colors.size() == 18);
    CHECK(s.task_count() == 216);

    std::size_t nonempty = 0;
    for (const auto& color : s.colors) nonempty += color.empty() ? 0 : 1;
    CHECK(nonempty == 18);

    const CellTask& t = s.colors[0][0];
    CHECK(t.slots.size() == 14);
    CHECK(t.pairs.size() == 13);
    CHECK(t.triples.size() == 78);  // C(13,2) forward extensions
    for (const auto& tr : t.triples) {
        CHECK(tr.a == 0);
        CHECK(tr.b >= 1);
        CHECK(tr.c > tr.b);
    }
}

TEST_CASE("3c08 schedule structure", "[schedule]") {
    const CellGrid g = grid_cells(4);
    const auto s = make_schedule(Traversal::C08, g);
    CHECK(s.newton);
    CHECK(s.colors.size() == 8);
    CHECK(s.task_count() == 64);

    const CellTask& t = s.colors[0][0];
    CHECK(t.slots.size() == 8);
    CHECK(t.pairs.size() == 13);
    CHECK(t.triples.size() == 44);

    // block ownership: pair and triple entries have componentwise-minimum
    // offsets equal to the base corner
    auto coord = [](int u, int axis) { return (u >> axis) & 1; };
    for (const auto& pr : t.pairs)
        for (int axis = 0; axis < 3; ++axis)
            CHECK(std::min(coord(pr.a, axis), coord(pr.b, axis)) == 0);
    for (const auto& tr : t.triples)
        for (int axis = 0; axis < 3; ++axis)
            CHECK(std::min({coord(tr.a, axis), coord(tr.b, axis), coord(tr.c, axis)}) == 0);
}

TEST_CASE("every cell is the base of exactly one task", "[schedule]") {
    for (int n : {4, 5}) {
        const CellGrid g = grid_cells(n);
        for (Traversal t : {Traversal::C01, Traversal::C18, Traversal::C08}) {
            const auto s = make_schedule(t, g);
            std::set<int> bases;
            for (const auto& color : s.colors)
                for (const auto& task : color) CHECK(bases.insert(task.base_cell).second);
            CHECK(static_cast<int>(bases.size()) == g.cell_count());
        }
    }
}

TEST_CASE("pair coverage: every adjacent cell pair exactly once", "[schedule]") {
    for (int n : {3, 4, 5, 6}) {
        const CellGrid g = grid_cells(n);
        const auto expected = coverage::brute_adjacent_pairs(g);
        for (Traversal t : {Traversal::C18, Traversal::C08}) {
            const auto s = make_schedule(t, g);
            const auto pairs = coverage::emitted_pairs(s);
            REQUIRE(pairs.size() == expected.size());
            for (const auto& [k, c] : pairs) {
                CHECK(c == 1);
                CHECK(expected.count(k) == 1);
            }
        }
        // pair coverage count identity: 13 per cell
        CHECK(expected.size() == static_cast<std::size_t>(g.cell_count()) * 13u);
    }
}

TEST_CASE("triple coverage on 4-cell and 6-cell grids", "[schedule]") {
    for (int n : {4, 6}) {
        const CellGrid g = grid_cells(n);
        const auto adjacent = coverage::brute_pairwise_adjacent_triples(g);
        const auto embeddable = coverage::brute_embeddable_triples(g);
        CHECK(adjacent == embeddable);  // no wrap-spanning triples once n >= 4

        const auto s18 = make_schedule(Traversal::C18, g);
        const auto t18 = coverage::emitted_triples(s18);
        for (const auto& k : adjacent) {
            auto it = t18.find(k);
            REQUIRE(it != t18.end());
            CHECK(it->second == 1);
        }

        const auto s08 = make_schedule(Traversal::C08, g);
        const auto t08 = coverage::emitted_triples(s08);
        CHECK(t08.size() == adjacent.size());
        for (const auto& [k, c] : t08) {
            CHECK(c == 1);
            CHECK(adjacent.count(k) == 1);
        }
        // pairwise-adjacent triple count: 44 per cell, each triple counted
        // once at its block anchor
        CHECK(adjacent.size() == static_cast<std::size_t>(g.cell_count()) * 44u);
    }
}

TEST_CASE("triple coverage on odd grids", "[schedule]") {
    const CellGrid g = grid_cells(5);
    const auto embeddable = coverage::brute_embeddable_triples(g);
    const auto s08 = make_schedule(Traversal::C08, g);
    const auto t08 = coverage::emitted_triples(s08);
    CHECK(t08.size() == embeddable.size());
    for (const auto& [k, c] : t08) {
        CHECK(c == 1);
        CHECK(embeddable.count(k) == 1);
    }
    const auto s18 = make_schedule(Traversal::C18, g);
    const auto t18 = coverage::emitted_triples(s18);
    for (const auto& k : embeddable) {
        auto it = t18.find(k);
        REQUIRE(it != t18.end());
        CHECK(it->second == 1);
    }
}

TEST_CASE("emitted cell-triple sets are nested across traversals", "[schedule]") {
    for (int n : {4, 5}) {
        const CellGrid g = grid_cells(n);
        auto key_set = [](const std::map<coverage::TripleKey, int>& m) {
            std::set<coverage::TripleKey> s;
            for (const auto& [k, c] : m) s.insert(k);
            return s;
        };
        const auto t01 = key_set(coverage::emitted_triples(make_schedule(Traversal::C01, g)));
        const auto t18 = key_set(coverage::emitted_triples(make_schedule(Traversal::C18, g)));
        const auto t08 = key_set(coverage::emitted_triples(make_schedule(Traversal::C08, g)));
        for (const auto& k : t08) CHECK(t18.count(k) == 1);
        for (const auto& k : t18) CHECK(t01.count(k) == 1);
        CHECK(t08.size() <= t18.size());
        CHECK(t18.size() <= t01.size());
    }
}

TEST_CASE("write sets are disjoint within every color", "[schedule]") {
    for (int n : {3, 4, 5, 6}) {
        const CellGrid g = grid_cells(n);
        for (Traversal t : {Traversal::C01, Traversal::C18, Traversal::C08})
            CHECK(coverage::colors_race_free(make_schedule(t, g)));
    }
    const CellGrid slab = build_grid(Box(12.5, 12.5, 75.0), 2.5);
    for (Traversal t : {Traversal::C01, Traversal::C18, Traversal::C08})
        CHECK(coverage::colors_race_free(make_schedule(t, slab)));
}

TEST_CASE("color counts on divisible grids match the compact patterns", "[schedule]") {
    const CellGrid g12 = grid_cells(12);
    CHECK(make_schedule(Traversal::C18, g12).colors.size() == 18);
    CHECK(make_schedule(Traversal::C08, g12).colors.size() == 8);
    CHECK(make_schedule(Traversal::C01, g12).colors.size() == 1);
    const CellGrid g6 = grid_cells(6);
    CHECK(make_schedule(Traversal::C18, g6).colors.size() == 18);
    CHECK(make_schedule(Traversal::C08, g6).colors.size() == 8);
}
