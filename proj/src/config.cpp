// config.cpp : strict JSON config parsing, overrides, CSV/JSON emission.
#include "bertrand/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "bertrand/orbits.hpp"

namespace bertrand::config {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& message) { throw std::invalid_argument(message); }

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed,
                    const std::string& scope) {
    for (const auto& [key, value] : obj.items()) {
        if (std::find_if(allowed.begin(), allowed.end(),
                         [&](const char* a) { return key == a; }) == allowed.end()) {
            fail("unknown config key '" + scope + key + "'");
        }
    }
}

double number_at(const json& obj, const std::string& key, const std::string& scope) {
    const auto& v = obj.at(key);
    if (!v.is_number()) fail("config key '" + scope + key + "' must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail("config key '" + scope + key + "' must be finite");
    return d;
}

double require_number(const json& obj, const std::string& key, const std::string& scope = "") {
    if (!obj.contains(key)) fail("missing config key '" + scope + key + "'");
    return number_at(obj, key, scope);
}

int require_int(const json& obj, const std::string& key, const std::string& scope = "") {
    if (!obj.contains(key) || !obj.at(key).is_number_integer())
        fail("config key '" + scope + key + "' must be an integer");
    return obj.at(key).get<int>();
}

Vec3 require_vec3(const json& obj, const std::string& key, const std::string& scope) {
    const auto& v = obj.at(key);
    if (!v.is_array() || v.size() != 3 || !std::all_of(v.begin(), v.end(), [](const json& x) {
            return x.is_number();
        }))
        fail("config key '" + scope + key + "' must be an array of 3 numbers");
    return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

InitialSpec parse_initial(const json& obj) {
    if (!obj.is_object()) fail("config key 'initial' must be an object");
    reject_unknown(obj, {"q", "p", "E", "J2", "r", "inward"}, "initial.");
    InitialSpec spec;
    if (obj.contains("q") || obj.contains("p")) {
        if (!obj.contains("q") || !obj.contains("p") || obj.size() != 2)
            fail("config key 'initial' must give either {q, p} or {E, J2, r[, inward]}");
        spec.by_constants = false;
        spec.q = require_vec3(obj, "q", "initial.");
        spec.p = require_vec3(obj, "p", "initial.");
        return spec;
    }
    spec.by_constants = true;
    spec.E = require_number(obj, "E", "initial.");
    spec.J2 = require_number(obj, "J2", "initial.");
    spec.r = require_number(obj, "r", "initial.");
    if (spec.J2 < 0) fail("config key 'initial.J2' must be nonnegative");
    if (spec.r <= 0) fail("config key 'initial.r' must be positive");
    if (obj.contains("inward")) {
        if (!obj.at("inward").is_boolean()) fail("config key 'initial.inward' must be a boolean");
        spec.inward = obj.at("inward").get<bool>();
    }
    return spec;
}

std::vector<double> parse_grid(const json& obj, const std::string& key) {
    if (!obj.contains(key)) fail("missing config key 'sweep." + key + "'");
    const auto& v = obj.at(key);
    if (!v.is_array() || v.empty()) fail("config key 'sweep." + key + "' must be a nonempty array");
    std::vector<double> grid;
    grid.reserve(v.size());
    for (const auto& x : v) {
        if (!x.is_number() || !std::isfinite(x.get<double>()))
            fail("config key 'sweep." + key + "' must contain finite numbers");
        grid.push_back(x.get<double>());
    }
    return grid;
}

void put(std::ostream& os, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    os << buf;
}

}  // namespace

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("cannot read config file '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        fail("config file '" + path + "' is not valid JSON: " + e.what());
    }
}

void apply_override(json& doc, const std::string& spec) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0) fail("override '" + spec + "' must be KEY=VALUE");
    const std::string path = spec.substr(0, eq);
    const std::string text = spec.substr(eq + 1);
    json value = json::parse(text, nullptr, false);
    if (value.is_discarded()) value = text;  // bare words are strings

    json* cur = &doc;
    std::size_t pos = 0;
    while (true) {
        const auto dot = path.find('.', pos);
        const std::string seg = path.substr(pos, dot - pos);
        if (seg.empty()) fail("override '" + spec + "' has an empty path segment");
        if (dot == std::string::npos) {
            // merge-patch convention: null removes the key
            if (value.is_null()) {
                if (cur->is_object()) cur->erase(seg);
            } else {
                (*cur)[seg] = std::move(value);
            }
            return;
        }
        cur = &(*cur)[seg];
        pos = dot + 1;
    }
}

RunConfig parse_config(const json& doc) {
    if (!doc.is_object()) fail("config root must be an object");
    reject_unknown(doc,
                   {"family", "branch", "n", "m", "K", "D", "G", "amplitude", "initial", "t_end",
                    "n_periods", "rtol", "atol", "out", "sweep"},
                   "");

    if (!doc.contains("family") || !doc.at("family").is_string())
        fail("config key 'family' must be \"type1\" or \"type2\"");
    const std::string family = doc.at("family").get<std::string>();
    const int n = require_int(doc, "n");
    const int m = require_int(doc, "m");
    const double K = require_number(doc, "K");
    const double G = doc.contains("G") ? number_at(doc, "G", "") : 0.0;
    const double amplitude = require_number(doc, "amplitude");

    RunConfig cfg;
    if (family == "type1") {
        if (doc.contains("D") || doc.contains("branch"))
            fail("config keys 'D' and 'branch' only apply to family type2");
        cfg.params = BertrandParams::type1(n, m, K, G, amplitude);
    } else if (family == "type2") {
        const double D = require_number(doc, "D");
        const int branch = require_int(doc, "branch");
        if (branch != 1 && branch != -1) fail("config key 'branch' must be +1 or -1");
        cfg.params = BertrandParams::type2(n, m, K, D, branch, G, amplitude);
    } else {
        fail("config key 'family' must be \"type1\" or \"type2\"");
    }

    if (doc.contains("initial")) cfg.initial = parse_initial(doc.at("initial"));
    if (doc.contains("t_end")) {
        cfg.t_end = number_at(doc, "t_end", "");
        if (*cfg.t_end < 0) fail("config key 't_end' must be nonnegative");
    }
    if (doc.contains("n_periods")) {
        cfg.n_periods = number_at(doc, "n_periods", "");
        if (*cfg.n_periods < 0) fail("config key 'n_periods' must be nonnegative");
    }
    for (const char* key : {"rtol", "atol"}) {
        if (!doc.contains(key)) continue;
        const double tol = number_at(doc, key, "");
        if (tol <= 0) fail(std::string("config key '") + key + "' must be positive");
        (key == std::string("rtol") ? cfg.rtol : cfg.atol) = tol;
    }
    if (doc.contains("out")) {
        if (!doc.at("out").is_string()) fail("config key 'out' must be a string");
        cfg.out = doc.at("out").get<std::string>();
    }
    if (doc.contains("sweep")) {
        const auto& sw = doc.at("sweep");
        if (!sw.is_object()) fail("config key 'sweep' must be an object");
        reject_unknown(sw, {"E", "J2"}, "sweep.");
        cfg.sweep = SweepSpec{parse_grid(sw, "E"), parse_grid(sw, "J2")};
    }

    if (cfg.sweep) {
        if (cfg.t_end) fail("config key 't_end' does not apply to a sweep; use 'n_periods'");
    } else {
        if (!cfg.initial) fail("missing config key 'initial'");
        if (cfg.t_end.has_value() == cfg.n_periods.has_value())
            fail("config requires exactly one of 't_end' or 'n_periods'");
    }
    return cfg;
}

dynamics::PhaseState resolve_initial_state(const RunConfig& cfg) {
    if (!cfg.initial) fail("missing config key 'initial'");
    const auto& spec = *cfg.initial;
    if (!spec.by_constants) return {spec.q, spec.p};
    return dynamics::initial_state_from_constants(cfg.params, spec.E, spec.J2, spec.r,
                                                  spec.inward);
}

double resolve_t_end(const RunConfig& cfg, double E, double J2) {
    if (cfg.t_end) return *cfg.t_end;
    const double periods = cfg.n_periods.value_or(0.0);
    if (periods == 0.0) return 0.0;
    try {
        return periods * orbits::radial_period(cfg.params, E, J2);
    } catch (const RadialOrbit& e) {
        fail(std::string("config key 'n_periods' requires a nonradial orbit: ") + e.what());
    } catch (const DegenerateOrbit& e) {
        fail(std::string("config key 'n_periods' requires a bounded periodic orbit: ") +
             e.what());
    }
}

void write_trajectory_csv(std::ostream& os, const BertrandParams& params,
                          const dynamics::Trajectory& traj,
                          const std::vector<runge_lenz::RungeLenzSample>* series) {
    os << "t,q1,q2,q3,p1,p2,p3,r,phi_unwrapped,k,E,J2,A1,A2,A3\n";
    const double nan = std::nan("");
    for (std::size_t i = 0; i < traj.samples.size(); ++i) {
        const auto& smp = traj.samples[i];
        const auto c = dynamics::conserved(params, smp.state);
        const Vec3 A = series ? (*series)[i].A : Vec3{nan, nan, nan};
        const double row[] = {smp.t,   smp.state.q.x, smp.state.q.y, smp.state.q.z,
                              smp.state.p.x, smp.state.p.y, smp.state.p.z,
                              smp.r,   smp.phi_unwrapped};
        for (double v : row) {
            put(os, v);
            os << ',';
        }
        os << runge_lenz::branch_index(traj, i).k << ',';
        put(os, c.E);
        os << ',';
        put(os, c.J2);
        for (double v : {A.x, A.y, A.z}) {
            os << ',';
            put(os, v);
        }
        os << '\n';
    }
}

json params_json(const BertrandParams& params) {
    json j;
    j["family"] = params.family == Family::TypeI ? "type1" : "type2";
    j["n"] = params.n;
    j["m"] = params.m;
    j["K"] = params.K;
    j["G"] = params.G;
    j["amplitude"] = params.amplitude;
    if (params.family == Family::TypeII) {
        j["D"] = params.D();
        j["branch"] = params.branch();
    }
    return j;
}

json report_json(const verify::VerificationReport& report) {
    json checks = json::array();
    for (const auto& c : report.checks) {
        json row;
        row["name"] = c.name;
        row["value"] = c.value;
        row["bound"] = c.bound;
        row["pass"] = c.pass;
        if (!c.note.empty()) row["note"] = c.note;
        checks.push_back(std::move(row));
    }
    json j;
    j["checks"] = std::move(checks);
    j["pass"] = report.pass;
    j["params"] = params_json(report.params);
    j["classification"] = orbits::orbit_class_name(report.classification);
    j["E"] = report.E;
    j["J2"] = report.J2;
    j["versions"] = {{"bertrand", version()}};
    return j;
}

std::string version() { return "0.1.0"; }

}  // namespace bertrand::config
