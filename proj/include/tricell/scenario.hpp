#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "tricell/dynamics.hpp"
#include "tricell/execute.hpp"
#include "tricell/observables.hpp"
#include "tricell/snapshot.hpp"

namespace tricell {

// Flat "key = value" configuration file; '#' starts a comment. Unknown keys
// are hard errors.
inline std::map<std::string, std::string> parse_config_text(std::istream& in) {
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r\n");
            if (a == std::string::npos) return std::string();
            const auto b = s.find_last_not_of(" \t\r\n");
            return s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!key.empty()) kv[key] = value;
    }
    return kv;
}

inline std::map<std::string, std::string> parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    return parse_config_text(in);
}

class ConfigReader {
public:
    explicit ConfigReader(std::map<std::string, std::string> kv) : kv_(std::move(kv)) {}

    std::string get_string(const std::string& key, const std::string& dflt) {
        used_.insert(key);
        auto it = kv_.find(key);
        return it == kv_.end() ? dflt : it->second;
    }
    double get_double(const std::string& key, double dflt) {
        used_.insert(key);
        auto it = kv_.find(key);
        if (it == kv_.end()) return dflt;
        return std::stod(it->second);
    }
    long get_long(const std::string& key, long dflt) {
        used_.insert(key);
        auto it = kv_.find(key);
        if (it == kv_.end()) return dflt;
        return std::stol(it->second);
    }

    void reject_unknown_keys() const {
        std::vector<std::string> unknown;
        for (const auto& [k, v] : kv_)
            if (used_.find(k) == used_.end()) unknown.push_back(k);
        if (!unknown.empty()) {
            std::string msg = "unknown config keys:";
            for (const auto& k : unknown) msg += " " + k;
            throw std::invalid_argument(msg);
        }
    }

private:
    std::map<std::string, std::string> kv_;
    std::set<std::string> used_;
};

struct Scenario {
    std::string name = "run";
    long n = 0;
    Vec3 box_lengths{};
    double t_target = 1.0;
    double dt = 0.004;
    double r_c = 2.5;
    double nu = 0.072;
    Traversal traversal = Traversal::C08;
    Cutoff cutoff = Cutoff::Pair;
    long steps_melt = 0;
    long steps_equil = 0;
    long steps_prod = 0;
    long nu_active_from_step = 0;
    long seed = 1;
    long threads = 1;
    bool sample_thermo = true;
    bool sample_rdf = false;
    bool sample_profile = false;
    bool lrc = true;
    double slab_extend_lz = 0.0;  // 0 = no slab extension after equilibration
    std::string output_dir = "out";

    static Scenario from_map(std::map<std::string, std::string> kv) {
        ConfigReader r(std::move(kv));
        Scenario s;
        s.name = r.get_string("name", s.name);
        s.n = r.get_long("n", s.n);
        s.box_lengths.x = r.get_double("box_x", 0.0);
        s.box_lengths.y = r.get_double("box_y", 0.0);
        s.box_lengths.z = r.get_double("box_z", 0.0);
        s.t_target = r.get_double("t_target", s.t_target);
        s.dt = r.get_double("dt", s.dt);
        s.r_c = r.get_double("r_c", s.r_c);
        s.nu = r.get_double("nu", s.nu);
        s.traversal = traversal_from_string(r.get_string("traversal", "3c08"));
        s.cutoff = cutoff_from_string(r.get_string("cutoff", "pair"));
        s.steps_melt = r.get_long("steps_melt", 0);
        s.steps_equil = r.get_long("steps_equil", 0);
        s.steps_prod = r.get_long("steps_prod", 0);
        s.nu_active_from_step = r.get_long("nu_active_from_step", 0);
        s.seed = r.get_long("seed", 1);
        s.threads = r.get_long("threads", 1);
        s.sample_thermo = r.get_long("sample_thermo", 1) != 0;
        s.sample_rdf = r.get_long("sample_rdf", 0) != 0;
        s.sample_profile = r.get_long("sample_profile", 0) != 0;
        s.lrc = r.get_long("lrc", 1) != 0;
        s.slab_extend_lz = r.get_double("slab_extend_lz", 0.0);
        s.output_dir = r.get_string("output_dir", s.output_dir);
        r.reject_unknown_keys();
        s.validate();
        return s;
    }

    static Scenario from_file(const std::string& path) {
        return from_map(parse_config_file(path));
    }

    void validate() const {
        if (n < 0) throw std::invalid_argument("scenario: n must be nonnegative");
        if (steps_melt < 0 || steps_equil < 0 || steps_prod < 0)
            throw std::invalid_argument("scenario: step counts must be nonnegative");
        if (threads < 1) throw std::invalid_argument("scenario: threads must be >= 1");
        if (!(box_lengths.x > 0 && box_lengths.y > 0 && box_lengths.z > 0))
            throw std::invalid_argument("scenario: box lengths must be positive");
    }

    Params params() const {
        Params p;
        p.nu = nu;
        p.r_c = r_c;
        p.dt = dt;
        p.t_target = t_target;
        p.cutoff_mode = cutoff;
        p.traversal = traversal;
        p.validate();
        return p;
    }
};

struct ScenarioResult {
    bool has_means = false;
    long production_samples = 0;
    double mean_E2_per_N = 0.0, mean_E3_per_N = 0.0, mean_E_per_N = 0.0;
    double mean_T = 0.0, mean_P = 0.0;
    double mean_W2 = 0.0, mean_W3 = 0.0;
    std::vector<InterfaceFit> fits;
    std::string thermo_path, rdf_path, profile_path, fit_path, snapshot_path;
};

namespace detail {

inline void write_csv_header(std::ofstream& out, const std::string& header) {
    out << header << "\n";
}

inline std::string fmt17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace detail

// Executes melt / equilibration / optional slab extension / production.
// Physics errors are rethrown with the offending step index.
inline ScenarioResult run_scenario(const Scenario& sc) {
    namespace fs = std::filesystem;
#ifdef _OPENMP
    omp_set_num_threads(static_cast<int>(sc.threads));
#endif
    fs::create_directories(sc.output_dir);

    Params params = sc.params();
    PhaseSpace ps(static_cast<std::size_t>(sc.n), Box(sc.box_lengths.x, sc.box_lengths.y,
                                                      sc.box_lengths.z));
    auto lattice = init_lattice(ps.size(), ps.box);
    ps.positions = lattice;
    if (ps.size() >= 2)
        init_velocities(ps, sc.t_target, static_cast<std::uint64_t>(sc.seed), params);

    auto engine = std::make_unique<Engine>(ps.box, params);
    Thermostat thermostat{ThermostatMode::Rescale, sc.t_target};

    ScenarioResult result;
    result.thermo_path = sc.output_dir + "/thermo.csv";
    result.snapshot_path = sc.output_dir + "/final_snapshot.txt";

    std::ofstream thermo_csv;
    if (sc.sample_thermo) {
        thermo_csv.open(result.thermo_path);
        detail::write_csv_header(thermo_csv, "step,E2_per_N,E3_per_N,Ekin_per_N,T_inst,P,W2,W3");
    }

    const double volume0 = ps.box.volume();
    double rho = ps.size() / volume0;
    double e_tail_per_n = 0.0, p_tail = 0.0;
    if (sc.lrc) lrc_homogeneous(rho, sc.r_c, e_tail_per_n, p_tail);

    Histogram rdf_hist(0.0, 0.5 * std::min({ps.box.L.x, ps.box.L.y, ps.box.L.z}));
    Histogram profile_hist(0.0, ps.box.L.z);

    const long total_steps = sc.steps_melt + sc.steps_equil + sc.steps_prod;
    const long prod_begin = sc.steps_melt + sc.steps_equil;

    auto effective_params = [&](long step_index) {
        Params p = params;
        if (step_index < sc.nu_active_from_step) p.nu = 0.0;
        return p;
    };

    double sum_E2 = 0.0, sum_E3 = 0.0, sum_Ekin = 0.0, sum_T = 0.0, sum_P = 0.0;
    double sum_W2 = 0.0, sum_W3 = 0.0;
    long samples = 0;

    ExecResult last;
    bool forces_ready = false;
    double nu_in_effect = -1.0;

    for (long step_index = 0; step_index < total_steps; ++step_index) {
        // slab extension between equilibration and production
        if (sc.slab_extend_lz > 0.0 && step_index == prod_begin) {
            const double old_lz = ps.box.L.z;
            if (sc.slab_extend_lz < old_lz)
                throw std::invalid_argument("scenario: slab_extend_lz must exceed box_z");
            const double shift = 0.5 * (sc.slab_extend_lz - old_lz);
            ps.box = Box(ps.box.L.x, ps.box.L.y, sc.slab_extend_lz);
            for (auto& p : ps.positions) {
                p.z += shift;
                p = wrap_position(p, ps.box);
            }
            remove_net_momentum(ps);
            engine = std::make_unique<Engine>(ps.box, params);
            profile_hist = Histogram(0.0, ps.box.L.z);
            rho = ps.size() / ps.box.volume();
            forces_ready = false;
        }

        Params p = effective_params(step_index);
        if (!forces_ready || p.nu != nu_in_effect) {
            last = engine->evaluate(ps, p);
            forces_ready = true;
            nu_in_effect = p.nu;
        }
        try {
            last = step(ps, p, *engine, thermostat);
        } catch (const std::exception& e) {
            throw std::runtime_error("scenario '" + sc.name + "' aborted at step " +
                                     std::to_string(step_index) + ": " + e.what());
        }

        const bool in_production = step_index >= prod_begin;
        if (!in_production) continue;

        const double n_d = static_cast<double>(ps.size());
        const double ekin = kinetic_energy(ps, params);
        const double t_inst = ps.size() ? 2.0 * ekin / (3.0 * n_d) : 0.0;
        const double e2_per_n = ps.size() ? last.E2 / n_d + e_tail_per_n : 0.0;
        const double e3_per_n = ps.size() ? last.E3 / n_d : 0.0;
        const double pressure_inst =
            pressure(rho, t_inst, last.W2, last.W3, ps.box.volume(), sc.lrc ? p_tail : 0.0);

        if (sc.sample_thermo) {
            thermo_csv << step_index << ',' << detail::fmt17(e2_per_n) << ','
                       << detail::fmt17(e3_per_n) << ',' << detail::fmt17(ekin / n_d) << ','
                       << detail::fmt17(t_inst) << ',' << detail::fmt17(pressure_inst) << ','
                       << detail::fmt17(last.W2) << ',' << detail::fmt17(last.W3) << "\n";
        }
        if (sc.sample_rdf) rdf_accumulate(ps, rdf_hist);
        if (sc.sample_profile) density_profile_accumulate(ps, profile_hist);

        sum_E2 += e2_per_n;
        sum_E3 += e3_per_n;
        sum_Ekin += ekin / n_d;
        sum_T += t_inst;
        sum_P += pressure_inst;
        sum_W2 += last.W2;
        sum_W3 += last.W3;
        ++samples;
    }

    if (samples > 0) {
        result.has_means = true;
        result.production_samples = samples;
        const double inv = 1.0 / static_cast<double>(samples);
        result.mean_E2_per_N = sum_E2 * inv;
        result.mean_E3_per_N = sum_E3 * inv;
        result.mean_E_per_N = (sum_E2 + sum_E3) * inv;
        result.mean_T = sum_T * inv;
        result.mean_P = sum_P * inv;
        result.mean_W2 = sum_W2 * inv;
        result.mean_W3 = sum_W3 * inv;
    }

    if (sc.sample_rdf) {
        result.rdf_path = sc.output_dir + "/rdf.csv";
        std::ofstream out(result.rdf_path);
        detail::write_csv_header(out, "r,g");
        for (const auto& p : rdf_finalize(rdf_hist, rho, ps.size()))
            out << detail::fmt17(p.x) << ',' << detail::fmt17(p.y) << "\n";
    }
    if (sc.sample_profile) {
        result.profile_path = sc.output_dir + "/profile.csv";
        auto profile = density_profile_finalize(profile_hist, ps.box);
        {
            std::ofstream out(result.profile_path);
            detail::write_csv_header(out, "z,rho");
            for (const auto& p : profile)
                out << detail::fmt17(p.x) << ',' << detail::fmt17(p.y) << "\n";
        }
        if (profile_hist.samples > 0) {
            // split at the slab center of mass and fit both interfaces
            double weighted = 0.0, total = 0.0;
            for (const auto& p : profile) {
                weighted += p.x * p.y;
                total += p.y;
            }
            const double z_com = total > 0.0 ? weighted / total : 0.5 * ps.box.L.z;
            std::vector<TablePoint> left, right;
            for (const auto& p : profile)
                (p.x <= z_com ? left : right).push_back(p);
            result.fit_path = sc.output_dir + "/fit.csv";
            std::ofstream out(result.fit_path);
            detail::write_csv_header(out, "side,rho_l,rho_g,z0,d,residual");
            auto emit = [&](const std::vector<TablePoint>& half, InterfaceSide side,
                            const char* label) {
                try {
                    InterfaceFit fit = fit_interface(half, side);
                    result.fits.push_back(fit);
                    out << label << ',' << detail::fmt17(fit.rho_l) << ','
                        << detail::fmt17(fit.rho_g) << ',' << detail::fmt17(fit.z0) << ','
                        << detail::fmt17(fit.d) << ',' << detail::fmt17(fit.residual) << "\n";
                } catch (const std::exception& e) {
                    out << label << ",fit-error: " << e.what() << "\n";
                }
            };
            emit(left, InterfaceSide::Left, "left");
            emit(right, InterfaceSide::Right, "right");
        }
    }

    write_snapshot(ps, result.snapshot_path);
    return result;
}

} // namespace tricell
