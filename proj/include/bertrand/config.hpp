// config.hpp : run configuration (JSON), override plumbing, and the CSV/JSON
// emitters shared by the command-line front end and its tests.
#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bertrand/dynamics.hpp"
#include "bertrand/runge_lenz.hpp"
#include "bertrand/verify.hpp"

namespace bertrand::config {

struct InitialSpec {
    bool by_constants = false;
    Vec3 q{0, 0, 0}, p{0, 0, 0};  // used when !by_constants
    double E = 0, J2 = 0, r = 0;  // used when by_constants
    bool inward = true;           // constants-based launches head inward unless flipped
};

struct SweepSpec {
    std::vector<double> E;
    std::vector<double> J2;
};

struct RunConfig {
    BertrandParams params = BertrandParams::type1(1, 1, 0.0);
    std::optional<InitialSpec> initial;
    std::optional<double> t_end;
    std::optional<double> n_periods;
    double rtol = 1e-12;
    double atol = 1e-12;
    std::string out;  // output file name; empty selects the subcommand default
    std::optional<SweepSpec> sweep;
};

// Reads and parses the file; failures surface as std::invalid_argument naming
// the path (config errors, exit code 2 at the CLI).
nlohmann::json load_json(const std::string& path);

// Applies "dotted.path=value" to the document; the value is parsed as JSON
// when possible and taken as a string otherwise. A null value removes the
// key (merge-patch convention), e.g. to swap n_periods for t_end.
void apply_override(nlohmann::json& doc, const std::string& spec);

// Strict parse: unknown keys anywhere are rejected; exactly one of t_end /
// n_periods unless a sweep grid is given; initial required unless sweeping.
RunConfig parse_config(const nlohmann::json& doc);

dynamics::PhaseState resolve_initial_state(const RunConfig& cfg);

// t_end directly, or n_periods radial periods for the orbit constants; a
// period request on non-periodic constants is a config error.
double resolve_t_end(const RunConfig& cfg, double E, double J2);

// Header t,q1,q2,q3,p1,p2,p3,r,phi_unwrapped,k,E,J2,A1,A2,A3; doubles printed
// with 17 significant digits; A columns are nan when no series is available.
void write_trajectory_csv(std::ostream& os, const BertrandParams& params,
                          const dynamics::Trajectory& traj,
                          const std::vector<runge_lenz::RungeLenzSample>* series);

nlohmann::json params_json(const BertrandParams& params);
nlohmann::json report_json(const verify::VerificationReport& report);

// Constant version stamp: identical configs must produce byte-identical reports.
std::string version();

}  // namespace bertrand::config
