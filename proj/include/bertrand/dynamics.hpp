// dynamics.hpp : Hamiltonian evaluation, equations of motion, trajectory
// integration and the elementary conserved quantities E, L, J^2.
#pragma once

#include <utility>
#include <vector>

#include "bertrand/errors.hpp"
#include "bertrand/params.hpp"
#include "bertrand/spaces.hpp"
#include "bertrand/vec3.hpp"

namespace bertrand::dynamics {

struct PhaseState {
    Vec3 q;  // rectangular chart position
    Vec3 p;  // conjugate momentum
};

struct ConservedSet {
    double E = 0;
    Vec3 L;         // q x p
    double J2 = 0;  // |L|^2
};

struct IntegratorSettings {
    double rtol = 1e-12;
    double atol = 1e-12;
    int samples = 2000;        // uniformly spaced output samples after t = 0
    double guard_band = 1e-9;  // relative chart-exit band at domain endpoints
    double dt_init = 0.0;      // 0 = choose from sample spacing
    double dt_floor_rel = 1e-14;  // step underflow threshold relative to t_end
};

enum class ExitStatus { Completed, ChartExit };

struct TrajectorySample {
    double t = 0;
    PhaseState state;        // world frame
    double r = 0;
    double phi_unwrapped = 0;  // continuous in-plane azimuth, |successive deltas| < pi
};

struct Trajectory {
    BertrandParams params = BertrandParams::type1(1, 1, 0.0);
    std::vector<TrajectorySample> samples;
    ExitStatus status = ExitStatus::Completed;
    ConservedSet conserved0;
    Mat3 plane_rotation;    // world -> orbital plane (L along +z), applied for phi tracking
    double J_signed = 0;    // normal component of L in the plane frame; 0 for radial states
    bool radial = false;    // J2 = 0 initial data
    double drift_energy = 0;  // max over samples of |E(t)-E(0)| / max(1, |E(0)|)
    double drift_angmom = 0;  // max over samples and components of |L(t)-L(0)|
    IntegratorSettings settings;
};

// 1/2 (|p|^2 + (h^-2 - 1)(q.p)^2/r^2) + V(r); equals the spherical-coordinate
// Hamiltonian p_r^2/(2h^2) + angular terms + V on corresponding states.
double hamiltonian(const BertrandParams& params, const PhaseState& state);

// Hamilton's equations with closed-form d(h^2)/ds and dV/ds; first component
// is identical to velocity_map.
std::pair<Vec3, Vec3> eom(const BertrandParams& params, const PhaseState& state);

// dq/dt = p + (h^-2 - 1)(q.p/|q|^2) q.
Vec3 velocity_map(const BertrandParams& params, const Vec3& q, const Vec3& p);

ConservedSet conserved(const BertrandParams& params, const PhaseState& state);

struct PlanarFrame {
    Mat3 rotation;      // maps L onto +z (identity when q, p already lie in z = 0)
    PhaseState state;   // rotated state
    double J = 0;       // signed normal angular momentum after rotation
    bool radial = false;
};

// For J2 = 0 the rotation carries q to the +x axis and the frame is flagged radial.
PlanarFrame rotate_to_plane(const PhaseState& state);

// Adaptive 8th-order embedded pair; samples at settings.samples uniform times,
// stops with ChartExit when r enters the guard band of a domain endpoint.
// Throws StepFailure when the tolerance is unreachable away from a boundary.
Trajectory integrate(const BertrandParams& params, const PhaseState& state0, double t_end,
                     const IntegratorSettings& settings = {});

// Fixed-step implicit midpoint (fixed-point iteration), secondary engine for
// long-time drift studies; same sampling and exit conventions.
Trajectory integrate_implicit_midpoint(const BertrandParams& params, const PhaseState& state0,
                                       double t_end, double dt, int samples = 2000);

// Planar state at azimuth 0 with the prescribed energy and J2 = |L|^2;
// DomainError when r is not between the turning radii of (E, J2).
PhaseState initial_state_from_constants(const BertrandParams& params, double E, double J2,
                                        double r, bool inward = false);

}  // namespace bertrand::dynamics
