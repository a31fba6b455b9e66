// verify.hpp : the numeric check battery run against a single trajectory, with
// pinned bounds. Produces machine-readable pass/fail rows; every row carries
// the bound it was judged against.
#pragma once

#include <string>
#include <vector>

#include "bertrand/dynamics.hpp"
#include "bertrand/orbits.hpp"

namespace bertrand::verify {

struct Check {
    std::string name;
    double value = 0;
    double bound = 0;
    bool pass = false;
    std::string note;  // empty, or the reason the check was skipped (skipped => pass)
};

struct VerificationReport {
    std::vector<Check> checks;
    bool pass = true;  // conjunction of the checks
    BertrandParams params = BertrandParams::type1(1, 1, 0.0);
    orbits::OrbitClass classification = orbits::OrbitClass::Empty;
    double E = 0;
    double J2 = 0;
};

// Battery: energy drift, angular momentum drift, orbit-equation residual,
// circle identity chi^2 + Theta^2 - 1, |A| - 1, componentwise A drift,
// conserved-tensor drift, apsidal angle vs m pi / n. Checks whose premise the
// trajectory cannot satisfy (radial or circular data, insufficient azimuth
// coverage, too few turning events) are marked skipped and count as passes.
VerificationReport verify_trajectory(const BertrandParams& params,
                                     const dynamics::Trajectory& traj);

}  // namespace bertrand::verify
