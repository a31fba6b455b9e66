// bertrand.cpp : command-line front end. Subcommands: simulate (trajectory CSV
// + summary), verify (check battery + JSON report), sweep (classification /
// apsidal table over an (E, J2) grid), catalog (named example spaces).
// Exit codes: 0 success or warnings, 1 verification failure, 2 config error,
// 3 numeric failure.
#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "bertrand/config.hpp"
#include "bertrand/orbits.hpp"
#include "bertrand/runge_lenz.hpp"
#include "bertrand/spaces.hpp"
#include "bertrand/verify.hpp"

namespace {

using namespace bertrand;
namespace fs = std::filesystem;

struct Options {
    std::string config_path;
    std::string example;
    std::vector<std::string> overrides;
    std::string out_dir = ".";
    int jobs = 0;  // 0 = one per hardware thread
};

// catalog arguments routed out of --override KEY=VALUE pairs
const std::unordered_map<std::string, std::vector<std::string>> kExampleArgs = {
    {"constant-curvature", {"kappa", "attractive"}},
    {"darboux-iii", {"k", "attractive"}},
    {"multifold-kepler", {"a", "b", "n", "m", "attractive"}},
};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

int effective_jobs(int jobs) {
    if (jobs > 0) return jobs;
    return std::max(1u, std::thread::hardware_concurrency());
}

nlohmann::json build_doc(const Options& opt) {
    if (!opt.config_path.empty() && !opt.example.empty())
        throw std::invalid_argument("give only one of --config and --example");

    nlohmann::json doc;
    std::vector<std::string> rest;
    if (!opt.example.empty()) {
        std::unordered_map<std::string, double> args;
        const auto known = kExampleArgs.find(opt.example);
        for (const auto& ov : opt.overrides) {
            const auto eq = ov.find('=');
            const std::string key = eq == std::string::npos ? ov : ov.substr(0, eq);
            const bool routed = known != kExampleArgs.end() &&
                                std::find(known->second.begin(), known->second.end(), key) !=
                                    known->second.end();
            if (!routed) {
                rest.push_back(ov);
                continue;
            }
            const auto value = nlohmann::json::parse(ov.substr(eq + 1), nullptr, false);
            if (value.is_number())
                args[key] = value.get<double>();
            else if (value.is_boolean())
                args[key] = value.get<bool>() ? 1.0 : 0.0;
            else
                throw std::invalid_argument("example argument '" + key + "' must be numeric");
        }
        doc = config::params_json(spaces::example_catalog(opt.example, args).params);
    } else if (!opt.config_path.empty()) {
        doc = config::load_json(opt.config_path);
        rest = opt.overrides;
    } else {
        throw std::invalid_argument("a config source is required: --config PATH or --example NAME");
    }
    for (const auto& ov : rest) config::apply_override(doc, ov);
    return doc;
}

fs::path resolve_out(const Options& opt, const std::string& name, const char* fallback) {
    fs::path p = name.empty() ? fs::path(fallback) : fs::path(name);
    if (p.is_relative()) p = fs::path(opt.out_dir) / p;
    if (!p.parent_path().empty()) fs::create_directories(p.parent_path());
    return p;
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream os(path);
    if (!os) throw std::invalid_argument("cannot write output file '" + path.string() + "'");
    return os;
}

void print_summary(const BertrandParams& params, const dynamics::ConservedSet& c0,
                   const dynamics::Trajectory* traj) {
    std::cout << "E = " << fmt(c0.E) << "\n";
    std::cout << "L = (" << fmt(c0.L.x) << ", " << fmt(c0.L.y) << ", " << fmt(c0.L.z) << ")\n";
    std::cout << "J2 = " << fmt(c0.J2) << "\n";
    std::cout << "classification = "
              << orbits::orbit_class_name(orbits::classify_orbit(params, c0.E, c0.J2)) << "\n";
    if (!traj) return;
    try {
        double spread = 0;
        const double apsidal = orbits::apsidal_angle(*traj, &spread);
        std::cout << "apsidal = " << fmt(apsidal) << " (spread " << fmt(spread) << ")\n";
    } catch (const std::exception& e) {
        std::cout << "apsidal = unavailable (" << e.what() << ")\n";
    }
}

int cmd_simulate(const Options& opt) {
    const auto cfg = config::parse_config(build_doc(opt));
    if (cfg.sweep)
        throw std::invalid_argument("config has a 'sweep' grid; use the sweep subcommand");
    const auto state0 = config::resolve_initial_state(cfg);
    const auto c0 = dynamics::conserved(cfg.params, state0);
    const double t_end = config::resolve_t_end(cfg, c0.E, c0.J2);
    const fs::path out = resolve_out(opt, cfg.out, "trajectory.csv");

    if (t_end == 0.0) {
        auto os = open_out(out);
        config::write_trajectory_csv(os, cfg.params, dynamics::Trajectory{}, nullptr);
        print_summary(cfg.params, c0, nullptr);
        std::cout << "wrote " << out.string() << "\n";
        return 0;
    }

    dynamics::IntegratorSettings settings;
    settings.rtol = cfg.rtol;
    settings.atol = cfg.atol;
    const auto traj = dynamics::integrate(cfg.params, state0, t_end, settings);

    const std::vector<runge_lenz::RungeLenzSample>* series_ptr = nullptr;
    std::vector<runge_lenz::RungeLenzSample> series;
    try {
        series = runge_lenz::runge_lenz_series(cfg.params, traj);
        series_ptr = &series;
    } catch (const DegenerateOrbit&) {
        // circular data: the phase is undefined, A columns stay nan
    }

    auto os = open_out(out);
    config::write_trajectory_csv(os, cfg.params, traj, series_ptr);
    print_summary(cfg.params, c0, &traj);
    std::cout << "samples = " << traj.samples.size() << ", t_end = " << fmt(t_end) << "\n";
    std::cout << "wrote " << out.string() << "\n";
    if (traj.status == dynamics::ExitStatus::ChartExit)
        std::cerr << "warning: trajectory reached the chart boundary at t = "
                  << fmt(traj.samples.back().t) << "; output truncated\n";
    return 0;
}

int cmd_verify(const Options& opt) {
    const auto cfg = config::parse_config(build_doc(opt));
    if (cfg.sweep)
        throw std::invalid_argument("config has a 'sweep' grid; use the sweep subcommand");
    const auto state0 = config::resolve_initial_state(cfg);
    const auto c0 = dynamics::conserved(cfg.params, state0);
    const double t_end = config::resolve_t_end(cfg, c0.E, c0.J2);
    if (t_end == 0.0) throw std::invalid_argument("verify needs a nonzero 't_end'/'n_periods'");

    dynamics::IntegratorSettings settings;
    settings.rtol = cfg.rtol;
    settings.atol = cfg.atol;
    const auto traj = dynamics::integrate(cfg.params, state0, t_end, settings);
    if (traj.status == dynamics::ExitStatus::ChartExit)
        std::cerr << "warning: trajectory reached the chart boundary at t = "
                  << fmt(traj.samples.back().t) << "; verifying the truncated segment\n";

    const auto report = verify::verify_trajectory(cfg.params, traj);
    const fs::path out = resolve_out(opt, cfg.out, "report.json");
    open_out(out) << config::report_json(report).dump(2) << "\n";

    for (const auto& c : report.checks) {
        const char* tag = c.note.empty() ? (c.pass ? "PASS" : "FAIL") : "SKIP";
        std::printf("[%s] %-16s value=%.3e bound=%.1e%s%s\n", tag, c.name.c_str(), c.value,
                    c.bound, c.note.empty() ? "" : " ", c.note.c_str());
    }
    std::cout << "verification: " << (report.pass ? "PASS" : "FAIL") << "\n";
    std::cout << "wrote " << out.string() << "\n";
    return report.pass ? 0 : 1;
}

struct SweepRow {
    double E = 0, J2 = 0;
    std::string klass;
    double apsidal = std::nan(""), apsidal_err = std::nan("");
    double drift_e = std::nan(""), drift_l = std::nan("");
    std::string error;
};

int cmd_sweep(const Options& opt) {
    const auto cfg = config::parse_config(build_doc(opt));
    if (!cfg.sweep) throw std::invalid_argument("sweep requires config key 'sweep'");
    const double periods = cfg.n_periods.value_or(5.0);
    const auto& grid = *cfg.sweep;

    std::vector<SweepRow> rows(grid.E.size() * grid.J2.size());
    std::atomic<std::size_t> cursor{0};
    auto worker = [&] {
        for (std::size_t i; (i = cursor.fetch_add(1)) < rows.size();) {
            SweepRow& row = rows[i];
            row.E = grid.E[i / grid.J2.size()];
            row.J2 = grid.J2[i % grid.J2.size()];
            try {
                const auto klass = orbits::classify_orbit(cfg.params, row.E, row.J2);
                row.klass = orbits::orbit_class_name(klass);
                if (klass != orbits::OrbitClass::BoundedPeriodic) continue;
                const auto tp = orbits::turning_points(cfg.params, row.E, row.J2);
                const double rmid = 0.5 * (tp.radii[0] + tp.radii[1]);
                const auto st =
                    dynamics::initial_state_from_constants(cfg.params, row.E, row.J2, rmid);
                const double T = orbits::radial_period(cfg.params, row.E, row.J2);
                dynamics::IntegratorSettings settings;
                settings.rtol = cfg.rtol;
                settings.atol = cfg.atol;
                // keep the apsidal localization resolved at any period count
                settings.samples = std::max(2000, int(700 * periods));
                const auto traj = dynamics::integrate(cfg.params, st, periods * T, settings);
                row.drift_e = traj.drift_energy;
                row.drift_l = traj.drift_angmom;
                row.apsidal = orbits::apsidal_angle(traj, &row.apsidal_err);
                if (traj.status == dynamics::ExitStatus::ChartExit) row.error = "chart exit";
            } catch (const std::exception& e) {
                row.error = e.what();
                std::replace(row.error.begin(), row.error.end(), ',', ';');
            }
        }
    };
    const std::size_t nthreads =
        std::min<std::size_t>(effective_jobs(opt.jobs), std::max<std::size_t>(rows.size(), 1));
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < nthreads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    const auto& p = cfg.params;
    const bool t2 = p.family == Family::TypeII;
    const fs::path out = resolve_out(opt, cfg.out, "sweep.csv");
    auto os = open_out(out);
    os << "family,n,m,K,D,branch,G,amplitude,E,J2,class,apsidal,apsidal_error,"
          "drift_energy,drift_angmom,error\n";
    for (const auto& row : rows) {
        os << (t2 ? "type2" : "type1") << ',' << p.n << ',' << p.m << ',' << fmt(p.K) << ','
           << (t2 ? fmt(p.D()) : std::string()) << ',' << (t2 ? std::to_string(p.branch()) : std::string())
           << ',' << fmt(p.G) << ',' << fmt(p.amplitude) << ',' << fmt(row.E) << ','
           << fmt(row.J2) << ',' << row.klass << ',' << fmt(row.apsidal) << ','
           << fmt(row.apsidal_err) << ',' << fmt(row.drift_e) << ',' << fmt(row.drift_l) << ','
           << row.error << '\n';
        std::printf("E=%-12.5g J2=%-12.5g %-16s apsidal=%-12.6g %s\n", row.E, row.J2,
                    row.klass.c_str(), row.apsidal, row.error.c_str());
    }
    std::cout << "wrote " << out.string() << "\n";
    return 0;
}

int cmd_catalog() {
    for (const auto& name : spaces::example_names()) {
        const auto ex = spaces::example_catalog(name);
        std::cout << ex.name << "\n  " << ex.summary << "\n";
        const auto args = kExampleArgs.find(ex.name);
        if (args != kExampleArgs.end()) {
            std::cout << "  args:";
            for (const auto& a : args->second) std::cout << ' ' << a;
            std::cout << "\n";
        }
        std::cout << "  params: " << config::params_json(ex.params).dump() << "\n";
        if (ex.companion)
            std::cout << "  companion: " << config::params_json(*ex.companion).dump() << "\n";
        if (ex.transform)
            std::cout << "  transform: rescaling chart to flat-conformal coordinates\n";
        std::cout << "\n";
    }
    return 0;
}

int run_guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const EmptyDomain& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const OriginError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    }
}

void add_common(CLI::App* cmd, Options& opt, bool with_jobs) {
    cmd->add_option("--config", opt.config_path, "config file (JSON)");
    cmd->add_option("--example", opt.example, "catalog example name");
    cmd->add_option("--override", opt.overrides, "KEY=VALUE config override (repeatable)");
    cmd->add_option("--out-dir", opt.out_dir, "directory for output files");
    if (with_jobs) cmd->add_option("--jobs", opt.jobs, "worker threads (default: hardware)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bertrand-space trajectory simulation and verification"};
    app.require_subcommand(1);

    Options opt;
    auto* sim = app.add_subcommand("simulate", "integrate one trajectory and write CSV samples");
    add_common(sim, opt, false);
    auto* ver = app.add_subcommand("verify", "run the check battery and write a JSON report");
    add_common(ver, opt, false);
    auto* swp = app.add_subcommand("sweep", "classification/apsidal table over an (E, J2) grid");
    add_common(swp, opt, true);
    app.add_subcommand("catalog", "list the named example spaces");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (sim->parsed()) return run_guarded([&] { return cmd_simulate(opt); });
    if (ver->parsed()) return run_guarded([&] { return cmd_verify(opt); });
    if (swp->parsed()) return run_guarded([&] { return cmd_sweep(opt); });
    return run_guarded([] { return cmd_catalog(); });
}
