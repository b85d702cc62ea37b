#pragma once

#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "tricell/coverage.hpp"
#include "tricell/execute.hpp"
#include "tricell/oracle.hpp"
#include "tricell/random.hpp"

namespace tricell {
namespace verify {

struct Deviation {
    double forces = 0.0;  // max componentwise error / max-norm of reference forces
    double E2 = 0.0, E3 = 0.0, W2 = 0.0, W3 = 0.0;

    double worst() const {
        double w = forces;
        for (double v : {E2, E3, W2, W3}) w = std::max(w, v);
        return w;
    }
};

inline double rel_err(double a, double b) {
    return std::fabs(a - b) / std::max(1.0, std::fabs(b));
}

inline Deviation compare(const PhaseSpace& ps, const ExecResult& got,
                         const oracle::OracleResult& ref) {
    Deviation d;
    double scale = 1.0;
    for (const auto& f : ref.forces)
        for (double c : {f.x, f.y, f.z}) scale = std::max(scale, std::fabs(c));
    for (std::size_t i = 0; i < ps.size(); ++i) {
        const Vec3 delta = ps.forces[i] - ref.forces[i];
        for (double c : {delta.x, delta.y, delta.z})
            d.forces = std::max(d.forces, std::fabs(c) / scale);
    }
    d.E2 = rel_err(got.E2, ref.E2);
    d.E3 = rel_err(got.E3, ref.E3);
    d.W2 = rel_err(got.W2, ref.W2);
    d.W3 = rel_err(got.W3, ref.W3);
    return d;
}

inline PhaseSpace random_phase_space(std::size_t n, const Box& box, Rng& rng) {
    PhaseSpace ps(n, box);
    for (auto& p : ps.positions)
        p = {rng.uniform(0.0, box.L.x), rng.uniform(0.0, box.L.y), rng.uniform(0.0, box.L.z)};
    return ps;
}

// Pair-cutoff equivalence of one traversal against the plain brute-force
// oracle; product-cutoff equivalence against the schedule-parameterized
// reference.
inline Deviation check_equivalence(PhaseSpace& ps, const Params& params) {
    Engine engine(ps.box, params);
    const ExecResult got = engine.evaluate(ps, params);
    if (params.cutoff_mode == Cutoff::Pair) {
        const auto ref = oracle::brute_force(ps, params);
        return compare(ps, got, ref);
    }
    const auto ref = oracle::reference_for_schedule(engine.schedule, ps, params);
    return compare(ps, got, ref);
}

struct CheckLine {
    std::string name;
    bool pass;
    std::string detail;
};

inline bool schedule_checks(const CellGrid& grid, std::vector<CheckLine>& lines) {
    bool all = true;
    const std::string dims = std::to_string(grid.nx) + "x" + std::to_string(grid.ny) + "x" +
                             std::to_string(grid.nz);
    const auto adj_pairs = coverage::brute_adjacent_pairs(grid);
    const auto embeddable = coverage::brute_embeddable_triples(grid);
    for (Traversal t : {Traversal::C18, Traversal::C08}) {
        const auto sched = make_schedule(t, grid);
        const auto pairs = coverage::emitted_pairs(sched);
        bool pairs_once = pairs.size() == adj_pairs.size();
        for (const auto& [k, c] : pairs)
            if (c != 1 || adj_pairs.find(k) == adj_pairs.end()) pairs_once = false;

        const auto triples = coverage::emitted_triples(sched);
        bool triples_once = true;
        for (const auto& k : embeddable) {
            auto it = triples.find(k);
            if (it == triples.end() || it->second != 1) triples_once = false;
        }
        if (t == Traversal::C08) {
            // block traversal must emit nothing beyond the embeddable set
            for (const auto& [k, c] : triples)
                if (c != 1 || embeddable.find(k) == embeddable.end()) triples_once = false;
        }
        const bool race_free = coverage::colors_race_free(sched);
        lines.push_back({std::string(to_string(t)) + " coverage on " + dims,
                         pairs_once && triples_once && race_free,
                         pairs_once ? (triples_once ? (race_free ? "ok" : "write-set overlap")
                                                    : "triple coverage mismatch")
                                    : "pair coverage mismatch"});
        all = all && pairs_once && triples_once && race_free;
    }
    return all;
}

// Compact self-check: coverage plus oracle equivalence on small random
// instances. Prints one line per check; returns overall success.
inline bool run_verify(std::ostream& os) {
    std::vector<CheckLine> lines;
    bool all = true;

    for (int n : {4, 5, 6}) {
        const double L = 2.5 * n;
        CellGrid grid = build_grid(Box(L, L, L), 2.5);
        all = schedule_checks(grid, lines) && all;
    }

    Rng rng(20250809);
    const double tol = 1e-10;
    int case_id = 0;
    for (double L : {10.0, 12.5}) {
        for (std::size_t n : {120, 250}) {
            PhaseSpace base = random_phase_space(n, Box(L, L, L), rng);
            for (Traversal t : {Traversal::C01, Traversal::C18, Traversal::C08})
                for (Cutoff c : {Cutoff::Pair, Cutoff::Product}) {
                    Params params;
                    params.traversal = t;
                    params.cutoff_mode = c;
                    PhaseSpace ps = base;
                    const Deviation dev = check_equivalence(ps, params);
                    const bool ok = dev.worst() <= tol;
                    char buf[128];
                    std::snprintf(buf, sizeof(buf), "max deviation %.3g", dev.worst());
                    lines.push_back({"oracle equivalence case " + std::to_string(case_id) +
                                         " " + to_string(t) + "/" + to_string(c),
                                     ok, buf});
                    all = all && ok;
                }
            ++case_id;
        }
    }

    for (const auto& l : lines)
        os << (l.pass ? "PASS" : "FAIL") << "  " << l.name << " (" << l.detail << ")\n";
    os << (all ? "verify: all checks passed\n" : "verify: FAILURES present\n");
    return all;
}

} // namespace verify
} // namespace tricell
