#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "tricell/bench.hpp"
#include "tricell/scenario.hpp"
#include "tricell/snapshot.hpp"

using namespace tricell;

namespace {
std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}
}

TEST_CASE("config parsing", "[harness]") {
    SECTION("keys, comments, whitespace") {
        std::stringstream ss(
            "# single-phase state\n"
            "name = demo\n"
            "n = 60\n"
            "box_x = 10\nbox_y=10\n box_z =10\n"
            "traversal = 3c18   # forward-neighbor traversal\n"
            "cutoff = product\n"
            "steps_prod = 5\n");
        const Scenario sc = Scenario::from_map(parse_config_text(ss));
        CHECK(sc.name == "demo");
        CHECK(sc.n == 60);
        CHECK(sc.traversal == Traversal::C18);
        CHECK(sc.cutoff == Cutoff::Product);
        CHECK(sc.steps_prod == 5);
        CHECK(sc.dt == 0.004);  // default
    }
    SECTION("unknown keys are rejected with their names") {
        std::stringstream ss("n = 10\nbox_x=10\nbox_y=10\nbox_z=10\nstep_melt = 5\nfoo = 1\n");
        try {
            Scenario::from_map(parse_config_text(ss));
            FAIL("expected invalid_argument");
        } catch (const std::invalid_argument& e) {
            const std::string msg = e.what();
            CHECK(msg.find("step_melt") != std::string::npos);
            CHECK(msg.find("foo") != std::string::npos);
        }
    }
    SECTION("invalid enum values") {
        std::stringstream ss("n=10\nbox_x=10\nbox_y=10\nbox_z=10\ntraversal = 3c99\n");
        CHECK_THROWS_AS(Scenario::from_map(parse_config_text(ss)), std::invalid_argument);
    }
}

TEST_CASE("mmups arithmetic", "[harness]") {
    CHECK(mmups(1000000, 1, 1.0) == Catch::Approx(1.0));
    CHECK(mmups(37000, 10, 12.7049) == Catch::Approx(0.37 / 12.7049).epsilon(1e-12));
    CHECK(mmups(37000, 10, 12.7049) == Catch::Approx(0.02912).margin(5e-6));
    CHECK(mmups(37000, 10, 1.3221) == Catch::Approx(0.37 / 1.3221).epsilon(1e-12));
    CHECK(mmups(37000, 10, 1.3221) == Catch::Approx(0.2798).margin(1e-4));
    CHECK_THROWS_AS(mmups(1000, 1, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(mmups(1000, 1, -1.0), std::invalid_argument);
}

TEST_CASE("empty production run is valid with absent averages", "[harness]") {
    Scenario sc;
    sc.name = "empty";
    sc.n = 60;
    sc.box_lengths = {10, 10, 10};
    sc.steps_melt = 3;
    sc.steps_prod = 0;
    sc.output_dir = "test_out_empty";
    const ScenarioResult r = run_scenario(sc);
    CHECK_FALSE(r.has_means);
    CHECK(r.production_samples == 0);
    CHECK(std::filesystem::exists(r.snapshot_path));
    const PhaseSpace back = read_snapshot(r.snapshot_path);
    CHECK(back.size() == 60);
    std::filesystem::remove_all("test_out_empty");
}

TEST_CASE("scenario outputs and determinism", "[harness]") {
    Scenario sc;
    sc.name = "mini";
    sc.n = 60;
    sc.box_lengths = {10, 10, 10};
    sc.t_target = 1.1;
    sc.steps_melt = 20;
    sc.steps_prod = 30;
    sc.nu_active_from_step = 20;
    sc.sample_rdf = true;
    sc.seed = 77;

    sc.output_dir = "test_out_a";
    sc.threads = 1;
    const ScenarioResult a = run_scenario(sc);
    REQUIRE(a.has_means);
    CHECK(a.production_samples == 30);

    sc.output_dir = "test_out_b";
    sc.threads = 2;
    const ScenarioResult b = run_scenario(sc);

    CHECK(slurp(a.thermo_path) == slurp(b.thermo_path));
    CHECK(slurp(a.rdf_path) == slurp(b.rdf_path));
    CHECK(slurp(a.snapshot_path) == slurp(b.snapshot_path));

    const std::string full = slurp(a.thermo_path);
    const std::string head = full.substr(0, full.find('\n'));
    CHECK(head == "step,E2_per_N,E3_per_N,Ekin_per_N,T_inst,P,W2,W3");

    std::filesystem::remove_all("test_out_a");
    std::filesystem::remove_all("test_out_b");
}

TEST_CASE("slab extension machinery", "[harness]") {
    Scenario sc;
    sc.name = "slab-smoke";
    sc.n = 220;
    sc.box_lengths = {10, 10, 10};
    sc.t_target = 0.9;
    sc.steps_melt = 25;
    sc.steps_equil = 5;
    sc.steps_prod = 40;
    sc.slab_extend_lz = 30.0;
    sc.sample_profile = true;
    sc.lrc = false;
    sc.output_dir = "test_out_slab";
    const ScenarioResult r = run_scenario(sc);
    CHECK(r.has_means);
    CHECK(std::filesystem::exists(r.profile_path));
    const PhaseSpace back = read_snapshot(r.snapshot_path);
    CHECK(back.box.L.z == 30.0);
    // density profile integrates to N
    std::ifstream in(r.profile_path);
    std::string line;
    std::getline(in, line);  // header
    double total = 0.0;
    const double bin_volume = 10.0 * 10.0 * (30.0 / 600.0);
    while (std::getline(in, line)) {
        const auto comma = line.find(',');
        total += std::stod(line.substr(comma + 1)) * bin_volume;
    }
    CHECK(total == Catch::Approx(220.0).epsilon(1e-9));
    std::filesystem::remove_all("test_out_slab");
}

TEST_CASE("benchmark driver smoke test", "[harness]") {
    BenchConfig cfg;
    cfg.n = 400;
    cfg.box_lengths = {10, 10, 10};
    cfg.iterations = 2;
    cfg.repetitions = 2;
    cfg.threads_list = {1, 2};
    cfg.traversals = {Traversal::C18, Traversal::C08};
    cfg.cutoffs = {Cutoff::Pair};
    cfg.output_dir = "test_out_bench";
    const BenchReport report = run_benchmark(cfg);
    REQUIRE(report.rows.size() == 4);
    for (const auto& row : report.rows) {
        CHECK(row.wall_3body > 0.0);
        CHECK(row.mmups_3body > 0.0);
        CHECK(row.hitrate_3body > 0.0);
    }
    CHECK(report.rows[0].speedup == Catch::Approx(1.0));
    write_bench_report(report, cfg.output_dir);
    CHECK(std::filesystem::exists("test_out_bench/bench.csv"));
    CHECK(std::filesystem::exists("test_out_bench/bench_meta.txt"));
    std::filesystem::remove_all("test_out_bench");
}

TEST_CASE("bench config parsing", "[harness]") {
    std::stringstream ss(
        "n = 500\nbox_x = 10\nbox_y = 10\nbox_z = 10\n"
        "iterations = 3\nrepetitions = 1\nthreads_list = 1,2,4\n"
        "traversals = 3c01,3c08\ncutoffs = product\ninit = uniform\n");
    const BenchConfig cfg = BenchConfig::from_map(parse_config_text(ss));
    CHECK(cfg.n == 500);
    CHECK(cfg.threads_list == std::vector<long>{1, 2, 4});
    CHECK(cfg.traversals.size() == 2);
    CHECK(cfg.cutoffs.size() == 1);
    CHECK(cfg.init == "uniform");

    std::stringstream bad("n = 500\nbox_x=10\nbox_y=10\nbox_z=10\ninit = banana\n");
    CHECK_THROWS_AS(BenchConfig::from_map(parse_config_text(bad)), std::invalid_argument);
}
