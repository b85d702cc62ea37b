#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "tricell/dynamics.hpp"
#include "tricell/scenario.hpp"

namespace tricell {

// MMUPS = N * iterations / (wall_seconds * 1e6)
inline double mmups(std::size_t n, long iterations, double wall_seconds) {
    if (!(wall_seconds > 0.0))
        throw std::invalid_argument("mmups: wall time must be positive");
    return static_cast<double>(n) * static_cast<double>(iterations) / (wall_seconds * 1e6);
}

struct BenchConfig {
    long n = 37000;
    Vec3 box_lengths{37.5, 37.5, 37.5};
    double t_target = 1.2;
    double r_c = 2.5;
    double nu = 0.072;
    long iterations = 10;
    long repetitions = 5;
    long seed = 1;
    std::vector<long> threads_list{1};
    std::vector<Traversal> traversals{Traversal::C01, Traversal::C18, Traversal::C08};
    std::vector<Cutoff> cutoffs{Cutoff::Pair, Cutoff::Product};
    std::string init = "lattice";  // or "uniform"
    std::string output_dir = "bench_out";

    static BenchConfig from_map(std::map<std::string, std::string> kv) {
        ConfigReader r(std::move(kv));
        BenchConfig c;
        c.n = r.get_long("n", c.n);
        c.box_lengths.x = r.get_double("box_x", c.box_lengths.x);
        c.box_lengths.y = r.get_double("box_y", c.box_lengths.y);
        c.box_lengths.z = r.get_double("box_z", c.box_lengths.z);
        c.t_target = r.get_double("t_target", c.t_target);
        c.r_c = r.get_double("r_c", c.r_c);
        c.nu = r.get_double("nu", c.nu);
        c.iterations = r.get_long("iterations", c.iterations);
        c.repetitions = r.get_long("repetitions", c.repetitions);
        c.seed = r.get_long("seed", c.seed);
        auto split = [](const std::string& s) {
            std::vector<std::string> parts;
            std::stringstream ss(s);
            std::string item;
            while (std::getline(ss, item, ',')) {
                if (!item.empty()) parts.push_back(item);
            }
            return parts;
        };
        if (auto v = r.get_string("threads_list", ""); !v.empty()) {
            c.threads_list.clear();
            for (const auto& p : split(v)) c.threads_list.push_back(std::stol(p));
        }
        if (auto v = r.get_string("traversals", ""); !v.empty()) {
            c.traversals.clear();
            for (const auto& p : split(v)) c.traversals.push_back(traversal_from_string(p));
        }
        if (auto v = r.get_string("cutoffs", ""); !v.empty()) {
            c.cutoffs.clear();
            for (const auto& p : split(v)) c.cutoffs.push_back(cutoff_from_string(p));
        }
        c.init = r.get_string("init", c.init);
        c.output_dir = r.get_string("output_dir", c.output_dir);
        r.reject_unknown_keys();
        if (c.init != "lattice" && c.init != "uniform")
            throw std::invalid_argument("bench: init must be 'lattice' or 'uniform'");
        if (c.iterations < 1 || c.repetitions < 1 || c.n < 2)
            throw std::invalid_argument("bench: iterations, repetitions >= 1 and n >= 2");
        return c;
    }

    static BenchConfig from_file(const std::string& path) {
        return from_map(parse_config_file(path));
    }
};

struct BenchRow {
    Traversal traversal;
    Cutoff cutoff;
    long threads;
    double wall_3body;      // mean accumulated three-body seconds per run
    double wall_total;      // mean accumulated full-step seconds per run
    double mmups_3body;
    double hitrate_3body;
    double hitrate_2body;
    double speedup;         // vs the first thread count in the list
    double rep_spread;      // (max-min)/mean across repetitions
    bool high_variance;     // rep_spread > 10%
};

struct BenchReport {
    BenchConfig config;
    std::vector<BenchRow> rows;
};

inline PhaseSpace make_bench_phase_space(const BenchConfig& cfg, const Params& params) {
    PhaseSpace ps(static_cast<std::size_t>(cfg.n),
                  Box(cfg.box_lengths.x, cfg.box_lengths.y, cfg.box_lengths.z));
    if (cfg.init == "lattice") {
        ps.positions = init_lattice(ps.size(), ps.box);
    } else {
        Rng rng(static_cast<std::uint64_t>(cfg.seed) * 2654435761u + 12345u);
        for (auto& p : ps.positions)
            p = {rng.uniform(0.0, ps.box.L.x), rng.uniform(0.0, ps.box.L.y),
                 rng.uniform(0.0, ps.box.L.z)};
    }
    init_velocities(ps, cfg.t_target, static_cast<std::uint64_t>(cfg.seed), params);
    return ps;
}

// Times the three-body force routine over `iterations` MD steps of a
// non-equilibrated phase space, averaged across repetitions.
inline BenchReport run_benchmark(const BenchConfig& cfg, bool verbose = false) {
    BenchReport report;
    report.config = cfg;

    const unsigned hw = std::thread::hardware_concurrency();
    for (long t : cfg.threads_list)
        if (hw > 0 && t > static_cast<long>(hw))
            std::cerr << "bench: warning: " << t << " threads exceed " << hw
                      << " hardware threads; running anyway\n";

    for (Traversal trav : cfg.traversals)
        for (Cutoff cut : cfg.cutoffs) {
            double base_wall = -1.0;
            for (long threads : cfg.threads_list) {
#ifdef _OPENMP
                omp_set_num_threads(static_cast<int>(threads));
#endif
                Params params;
                params.nu = cfg.nu;
                params.r_c = cfg.r_c;
                params.t_target = cfg.t_target;
                params.traversal = trav;
                params.cutoff_mode = cut;

                std::vector<double> walls, totals;
                double hit3 = 0.0, hit2 = 0.0;
                for (long rep = 0; rep < cfg.repetitions; ++rep) {
                    PhaseSpace ps = make_bench_phase_space(cfg, params);
                    Engine engine(ps.box, params);
                    engine.evaluate(ps, params);  // prime forces
                    double wall3 = 0.0, wall_all = 0.0;
                    TripletCounters counters;
                    for (long it = 0; it < cfg.iterations; ++it) {
                        const auto t0 = std::chrono::steady_clock::now();
                        ExecResult r = step(ps, params, engine);
                        const auto t1 = std::chrono::steady_clock::now();
                        wall3 += r.seconds_triple;
                        wall_all += std::chrono::duration<double>(t1 - t0).count();
                        counters = r.counters;
                    }
                    walls.push_back(wall3);
                    totals.push_back(wall_all);
                    hit3 = hitrate(counters);
                    hit2 = 100.0 * static_cast<double>(counters.pairs_accepted) /
                           static_cast<double>(counters.pairs_traversed);
                }
                double mean = 0.0, mn = walls[0], mx = walls[0], mean_total = 0.0;
                for (std::size_t i = 0; i < walls.size(); ++i) {
                    mean += walls[i];
                    mean_total += totals[i];
                    mn = std::min(mn, walls[i]);
                    mx = std::max(mx, walls[i]);
                }
                mean /= static_cast<double>(walls.size());
                mean_total /= static_cast<double>(totals.size());
                if (base_wall < 0.0) base_wall = mean;

                BenchRow row;
                row.traversal = trav;
                row.cutoff = cut;
                row.threads = threads;
                row.wall_3body = mean;
                row.wall_total = mean_total;
                row.mmups_3body = mmups(static_cast<std::size_t>(cfg.n), cfg.iterations, mean);
                row.hitrate_3body = hit3;
                row.hitrate_2body = hit2;
                row.speedup = base_wall / mean;
                row.rep_spread = mean > 0.0 ? (mx - mn) / mean : 0.0;
                row.high_variance = row.rep_spread > 0.10;
                report.rows.push_back(row);
                if (verbose)
                    std::cerr << "bench: " << to_string(trav) << "/" << to_string(cut) << " t="
                              << threads << " wall3=" << mean << "s mmups=" << row.mmups_3body
                              << " hit3=" << hit3 << "%\n";
            }
        }
    return report;
}

inline void write_bench_report(const BenchReport& report, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    {
        std::ofstream out(dir + "/bench.csv");
        out << "traversal,cutoff,threads,wall_3body_s,wall_step_s,mmups,hitrate_3body,"
               "hitrate_2body,speedup,rep_spread,high_variance\n";
        for (const auto& r : report.rows) {
            out << to_string(r.traversal) << ',' << to_string(r.cutoff) << ',' << r.threads
                << ',' << detail::fmt17(r.wall_3body) << ',' << detail::fmt17(r.wall_total)
                << ',' << detail::fmt17(r.mmups_3body) << ',' << detail::fmt17(r.hitrate_3body)
                << ',' << detail::fmt17(r.hitrate_2body) << ',' << detail::fmt17(r.speedup)
                << ',' << detail::fmt17(r.rep_spread) << ',' << (r.high_variance ? 1 : 0)
                << "\n";
        }
    }
    {
        std::ofstream out(dir + "/bench_meta.txt");
        out << "timing_scope = three-body force routine only; full step time reported "
               "separately\n";
        out << "loop_scheduling = omp dynamic over tasks within each color\n";
        out << "thread_pinning = not enforced; honor OMP_PROC_BIND / OMP_PLACES if set\n";
        out << "hardware_threads = " << std::thread::hardware_concurrency() << "\n";
        out << "n = " << report.config.n << "\n";
        out << "box = " << report.config.box_lengths.x << " " << report.config.box_lengths.y
            << " " << report.config.box_lengths.z << "\n";
        out << "iterations = " << report.config.iterations << "\n";
        out << "repetitions = " << report.config.repetitions << "\n";
        out << "init = " << report.config.init << "\n";
    }
}

} // namespace tricell
