// orbits.hpp : closed-form orbit equations in the u/v substitution variables,
// turning-point analysis, residuals, apsidal angles and orbit classification.
#pragma once

#include <optional>

#include "bertrand/dynamics.hpp"
#include "bertrand/params.hpp"

namespace bertrand::orbits {

struct OrbitConstants {
    double E = 0;
    double J2 = 0;
    double phi0 = 0;  // integration constant of the orbit equation cos(n phi/m - phi0) = chi
};

struct TurningPoints {
    int count = 0;                  // admissible roots (0, 1 or 2)
    double substitution_values[2] = {0, 0};  // roots in u (TypeI) or v (TypeII)
    double radii[2] = {0, 0};       // the corresponding radii
};

enum class OrbitClass { BoundedPeriodic, ChartEscaping, Circular, Radial, Empty };

const char* orbit_class_name(OrbitClass c);

// Discriminant/4 of the radial quadratic in the substitution variable; equals
// the squared normalization of chi. Negative = no orbit with these constants.
double orbit_disc(const BertrandParams& params, double E, double J2);

// cos(n phi/m - phi0) along the orbit:
// TypeI  (amplitude + J2 u)/sqrt(amplitude^2 + 2 J2 (E-G) + K J2^2)
// TypeII (J2 (v+D) + 2G - 2E)/sqrt((2E-2G-D J2)^2 + 4 branch amplitude J2 - K J2^2)
double chi(const BertrandParams& params, double r2, double J2, double E);

// d(chi)/d(r^2), closed form.
double chi_d1(const BertrandParams& params, double r2, double J2, double E);

// sin(n phi/m - phi0) along the orbit: -2 rrdot (m r2)/(n J) chi_d1, with the
// 1/J cancelled against the J^2 inside chi_d1 so J = 0 evaluates finitely.
double theta(const BertrandParams& params, double rrdot, double r2, double J, double E);

// r dr/dt of a phase state: (q.p)/h^2.
double radial_rate(const BertrandParams& params, const dynamics::PhaseState& state);

// max over samples of |cos(n phi/m - phi0) - chi|; +inf when the constants are
// inconsistent with the trajectory; 0 for circular data (the equation is trivial).
double orbit_residual(const BertrandParams& params, const dynamics::Trajectory& traj,
                      const OrbitConstants& constants);

// E, J2 from the trajectory's conserved set; phi0 the circular mean of
// n phi/m - atan2(theta, chi) over the samples.
OrbitConstants fit_phi0(const BertrandParams& params, const dynamics::Trajectory& traj);

TurningPoints turning_points(const BertrandParams& params, double E, double J2);

// Inverts cos(n phi/m - phi0) = chi for the radius; empty when the required
// substitution value falls outside its admissible range.
std::optional<double> solve_r_of_phi(const BertrandParams& params, const OrbitConstants& constants,
                                     double phi);

// Unwrapped azimuth between consecutive radial turning events of alternating
// type (min to max); events located by cubic Hermite interpolation of r(t).
// The spread across event pairs is written to *uncertainty when given.
double apsidal_angle(const dynamics::Trajectory& traj, double* uncertainty = nullptr);

OrbitClass classify_orbit(const BertrandParams& params, double E, double J2);

// Time of one radial oscillation: (2m/(nJ)) integral of r^2 over a half cosine
// sweep of the substitution variable. Requires a BoundedPeriodic orbit.
double radial_period(const BertrandParams& params, double E, double J2);

}  // namespace bertrand::orbits
