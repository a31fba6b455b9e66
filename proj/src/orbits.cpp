// orbits.cpp : orbit equations in the substitution variables.
#include "bertrand/orbits.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace bertrand::orbits {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Open admissible range of the substitution variable over the radial domain.
// u = sqrt(1/r^2 + K) decreases with r from +inf; v decreases for branch +1
// and increases for branch -1 (dv/ds = -branch v/(s sqrt(R))).
struct SubstRange {
    double lo = 0, hi = 0;
};

SubstRange subst_range(const BertrandParams& params) {
    if (params.family == Family::TypeI) return {std::sqrt(std::max(params.K, 0.0)), kInf};
    const auto dom = spaces::radial_domain(params);
    const double K = params.K, D = params.D();
    const double v_far = std::isfinite(dom.r_hi)
                             ? std::sqrt(std::max(K, 0.0))
                             : -D + params.branch() * std::sqrt(D * D - K);
    if (params.branch() > 0) return {v_far, kInf};
    return {0.0, v_far};
}

// r^2 as a function of the substitution variable.
double subst_to_s(const BertrandParams& params, double x) {
    if (params.family == Family::TypeI) return 1.0 / (x * x - params.K);
    return 2.0 * x / (x * x + 2.0 * params.D() * x + params.K);
}

// Radial quadratic a x^2 + b x + c (x the substitution variable); rrdot^2 is a
// positive multiple of Q(x).
struct RadialQuadratic {
    double a, b, c;
};

RadialQuadratic radial_quadratic(const BertrandParams& params, double E, double J2) {
    const double A = params.amplitude, G = params.G;
    if (params.family == Family::TypeI) {
        return {-J2, -2.0 * A, 2.0 * (E - G) + params.K * J2};
    }
    return {-J2, 4.0 * (E - G) - 2.0 * params.D() * J2,
            4.0 * params.branch() * A - params.K * J2};
}

double chi_norm(const BertrandParams& params, double E, double J2) {
    const double d = orbit_disc(params, E, J2);
    if (d <= 0) {
        std::ostringstream os;
        os << "no orbit with E = " << E << ", J2 = " << J2
           << " (orbit discriminant " << d << " <= 0)";
        throw DegenerateOrbit(os.str());
    }
    return std::sqrt(d);
}

bool nearly_circular_samples(const dynamics::Trajectory& traj) {
    double rmin = kInf, rmax = 0;
    for (const auto& s : traj.samples) {
        rmin = std::min(rmin, s.r);
        rmax = std::max(rmax, s.r);
    }
    return rmax - rmin <= 1e-9 * rmax;
}

}  // namespace

const char* orbit_class_name(OrbitClass c) {
    switch (c) {
        case OrbitClass::BoundedPeriodic: return "bounded-periodic";
        case OrbitClass::ChartEscaping: return "chart-escaping";
        case OrbitClass::Circular: return "circular";
        case OrbitClass::Radial: return "radial";
        case OrbitClass::Empty: return "empty";
    }
    return "?";
}

double orbit_disc(const BertrandParams& params, double E, double J2) {
    const double A = params.amplitude, G = params.G, K = params.K;
    if (params.family == Family::TypeI) return A * A + 2.0 * J2 * (E - G) + K * J2 * J2;
    const double lead = 2.0 * (E - G) - params.D() * J2;
    return lead * lead + 4.0 * params.branch() * A * J2 - K * J2 * J2;
}

double chi(const BertrandParams& params, double r2, double J2, double E) {
    const double P = chi_norm(params, E, J2);
    const double x = spaces::eval_radial(params, r2).subst;
    if (params.family == Family::TypeI) return (params.amplitude + J2 * x) / P;
    return (J2 * (x + params.D()) + 2.0 * (params.G - E)) / P;
}

double chi_d1(const BertrandParams& params, double r2, double J2, double E) {
    const double P = chi_norm(params, E, J2);
    const auto ev = spaces::eval_radial(params, r2);
    if (params.family == Family::TypeI) {
        // du/ds = -1/(2 u s^2)
        return -J2 / (2.0 * P * ev.subst * r2 * r2);
    }
    // dv/ds = -branch v / (s sqrt(R))
    return -params.branch() * J2 * ev.subst / (r2 * ev.sqrt_radicand * P);
}

double theta(const BertrandParams& params, double rrdot, double r2, double J, double E) {
    const double P = chi_norm(params, E, J * J);
    const auto ev = spaces::eval_radial(params, r2);
    const double m = params.m, n = params.n;
    if (params.family == Family::TypeI) {
        return m * J * rrdot / (n * P * ev.subst * r2);
    }
    return 2.0 * params.branch() * m * J * rrdot * ev.subst / (n * P * ev.sqrt_radicand);
}

double radial_rate(const BertrandParams& params, const dynamics::PhaseState& state) {
    const double s = norm2(state.q);
    return dot(state.q, state.p) / spaces::eval_radial(params, s).h2;
}

double orbit_residual(const BertrandParams& params, const dynamics::Trajectory& traj,
                      const OrbitConstants& constants) {
    if (traj.samples.empty()) return kInf;
    const double ratio = double(params.n) / double(params.m);
    double worst = 0;
    for (const auto& smp : traj.samples) {
        double c;
        try {
            c = chi(params, smp.r * smp.r, constants.J2, constants.E);
        } catch (const DegenerateOrbit&) {
            // vanishing cosine amplitude: the equation constrains nothing, and a
            // genuinely circular trajectory satisfies it identically
            return nearly_circular_samples(traj) ? 0.0 : kInf;
        } catch (const DomainError&) {
            return kInf;
        }
        worst = std::max(worst, std::fabs(std::cos(ratio * smp.phi_unwrapped - constants.phi0) - c));
    }
    return worst;
}

OrbitConstants fit_phi0(const BertrandParams& params, const dynamics::Trajectory& traj) {
    if (traj.samples.empty()) throw InsufficientData("fit_phi0 needs a sampled trajectory");
    OrbitConstants out;
    out.E = traj.conserved0.E;
    out.J2 = traj.conserved0.J2;
    const double ratio = double(params.n) / double(params.m);
    double sx = 0, sy = 0;
    try {
        for (const auto& smp : traj.samples) {
            const double s = smp.r * smp.r;
            const double c = chi(params, s, out.J2, out.E);
            const double rr = radial_rate(params, smp.state);
            const double th = theta(params, rr, s, traj.J_signed, out.E);
            const double a = ratio * smp.phi_unwrapped - std::atan2(th, c);
            sx += std::cos(a);
            sy += std::sin(a);
        }
    } catch (const DegenerateOrbit&) {
        return out;  // circular data: any phi0 satisfies the degenerate equation
    }
    if (sx == 0 && sy == 0) throw InsufficientData("fit_phi0: no phase information in samples");
    out.phi0 = std::atan2(sy, sx);
    return out;
}

TurningPoints turning_points(const BertrandParams& params, double E, double J2) {
    const auto range = subst_range(params);
    const auto Q = radial_quadratic(params, E, J2);
    std::vector<double> roots;
    if (J2 == 0.0) {
        if (Q.b != 0.0) roots.push_back(-Q.c / Q.b);
    } else {
        const double disc = orbit_disc(params, E, J2);  // = (b^2 - 4ac)/4
        if (disc < 0) {
            std::ostringstream os;
            os << "no turning points: orbit discriminant " << disc << " < 0";
            throw DegenerateOrbit(os.str());
        }
        const double P = std::sqrt(std::max(disc, 0.0));
        // a = -J2 < 0: Q > 0 between the roots
        roots.push_back((Q.b - 2.0 * P) / (2.0 * J2));
        if (P > 0) roots.push_back((Q.b + 2.0 * P) / (2.0 * J2));
    }
    std::sort(roots.begin(), roots.end());
    TurningPoints out;
    for (double x : roots) {
        if (!(x > range.lo) || !(x < range.hi)) continue;
        out.substitution_values[out.count] = x;
        out.radii[out.count] = std::sqrt(subst_to_s(params, x));  // radii[i] pairs with values[i]
        ++out.count;
    }
    return out;
}

std::optional<double> solve_r_of_phi(const BertrandParams& params,
                                     const OrbitConstants& constants, double phi) {
    if (constants.J2 <= 0) throw RadialOrbit("solve_r_of_phi needs J2 > 0 (phi is constant)");
    const double disc = orbit_disc(params, constants.E, constants.J2);
    if (disc < 0) throw DegenerateOrbit("no orbit with these constants");
    const double P = std::sqrt(disc);
    const double c = std::cos(double(params.n) / double(params.m) * phi - constants.phi0);
    double x;
    if (params.family == Family::TypeI) {
        x = (c * P - params.amplitude) / constants.J2;
    } else {
        x = (2.0 * (constants.E - params.G) - params.D() * constants.J2 + c * P) / constants.J2;
    }
    const auto range = subst_range(params);
    if (!(x > range.lo) || !(x < range.hi)) return std::nullopt;
    return std::sqrt(subst_to_s(params, x));
}

namespace {

struct TurningEvent {
    double t, phi;
    bool minimum;
};

// Quintic Hermite interpolant at local coordinate tau; d*, c* are the first
// and second derivatives scaled by the interval length and its square.
double hermite5(double f0, double d0, double c0, double f1, double d1, double c1, double tau) {
    const double t2 = tau * tau, t3 = t2 * tau, t4 = t3 * tau, t5 = t4 * tau;
    return f0 * (1 - 10 * t3 + 15 * t4 - 6 * t5) + d0 * (tau - 6 * t3 + 8 * t4 - 3 * t5) +
           c0 * 0.5 * (t2 - 3 * t3 + 3 * t4 - t5) + f1 * (10 * t3 - 15 * t4 + 6 * t5) +
           d1 * (-4 * t3 + 7 * t4 - 3 * t5) + c1 * 0.5 * (t3 - 2 * t4 + t5);
}

double hermite5_d(double f0, double d0, double c0, double f1, double d1, double c1, double tau) {
    const double t2 = tau * tau, t3 = t2 * tau, t4 = t3 * tau;
    return f0 * (-30 * t2 + 60 * t3 - 30 * t4) + d0 * (1 - 18 * t2 + 32 * t3 - 15 * t4) +
           c0 * 0.5 * (2 * tau - 9 * t2 + 12 * t3 - 5 * t4) +
           f1 * (30 * t2 - 60 * t3 + 30 * t4) + d1 * (-12 * t2 + 28 * t3 - 15 * t4) +
           c1 * 0.5 * (3 * t2 - 8 * t3 + 5 * t4);
}

std::vector<TurningEvent> turning_events(const dynamics::Trajectory& traj) {
    const auto& S = traj.samples;
    std::vector<TurningEvent> events;
    if (S.size() < 3 || nearly_circular_samples(traj)) return events;

    std::vector<double> rd(S.size());
    for (size_t i = 0; i < S.size(); ++i) rd[i] = radial_rate(traj.params, S[i].state) / S[i].r;

    auto phidot = [&](size_t i) { return traj.J_signed / (S[i].r * S[i].r); };
    // Energy conservation turns rdot^2 = (2(E - V) - J^2/s)/h^2 =: F(s) into
    // rddot = r F'(s) along the orbit, so second derivatives come from radial
    // data alone and the interpolants below reach fifth order.
    auto rddot = [&](size_t i) {
        const double s = S[i].r * S[i].r;
        const auto ev = spaces::eval_radial(traj.params, s);
        const double E = dynamics::hamiltonian(traj.params, S[i].state);
        const double J2 = norm2(cross(S[i].state.q, S[i].state.p));
        const double num = (J2 / (s * s) - 2.0 * ev.dV_ds) * ev.h2 -
                           (2.0 * (E - ev.V) - J2 / s) * ev.dh2_ds;
        return S[i].r * num / (ev.h2 * ev.h2);
    };
    auto phiddot = [&](size_t i) {
        return -2.0 * traj.J_signed * rd[i] / (S[i].r * S[i].r * S[i].r);
    };

    for (size_t i = 0; i + 1 < S.size(); ++i) {
        if (rd[i] == 0.0) {
            events.push_back({S[i].t, S[i].phi_unwrapped, rd[i + 1] > 0});
            continue;
        }
        if (!(rd[i] * rd[i + 1] < 0)) continue;
        const double h = S[i + 1].t - S[i].t;
        const double r0 = S[i].r, r1 = S[i + 1].r;
        const double d0 = rd[i] * h, d1 = rd[i + 1] * h;
        const double c0 = rddot(i) * h * h, c1 = rddot(i + 1) * h * h;
        // dr/dtau changes sign across the interval; bisect it to the extremum
        double lo = 0.0, hi = 1.0;
        const bool rising = d1 > 0;
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double g = hermite5_d(r0, d0, c0, r1, d1, c1, mid);
            ((g > 0) == rising ? hi : lo) = mid;
        }
        const double tau = 0.5 * (lo + hi);
        const double phi = hermite5(S[i].phi_unwrapped, phidot(i) * h, phiddot(i) * h * h,
                                    S[i + 1].phi_unwrapped, phidot(i + 1) * h,
                                    phiddot(i + 1) * h * h, tau);
        events.push_back({S[i].t + tau * h, phi, rd[i] < 0});
    }
    return events;
}

}  // namespace

double apsidal_angle(const dynamics::Trajectory& traj, double* uncertainty) {
    const auto events = turning_events(traj);
    std::vector<double> sweeps;
    for (size_t i = 0; i + 1 < events.size(); ++i) {
        if (events[i].minimum == events[i + 1].minimum) continue;  // same-type neighbors: skip
        sweeps.push_back(std::fabs(events[i + 1].phi - events[i].phi));
    }
    if (sweeps.empty()) {
        throw InsufficientTurningPoints("apsidal_angle needs two alternating turning events");
    }
    double mean = 0;
    for (double s : sweeps) mean += s;
    mean /= double(sweeps.size());
    if (uncertainty) {
        double spread = 0;
        for (double s : sweeps) spread = std::max(spread, std::fabs(s - mean));
        *uncertainty = spread;
    }
    return mean;
}

OrbitClass classify_orbit(const BertrandParams& params, double E, double J2) {
    if (J2 == 0.0) return OrbitClass::Radial;
    const double disc = orbit_disc(params, E, J2);
    const auto Q = radial_quadratic(params, E, J2);
    const double scale = std::max({Q.b * Q.b, std::fabs(4.0 * Q.a * Q.c), 1e-300});
    if (4.0 * disc < -1e-12 * scale) return OrbitClass::Empty;
    const auto range = subst_range(params);
    if (4.0 * std::fabs(disc) < 1e-12 * scale) {
        const double x = Q.b / (2.0 * J2);  // double root of -J2 x^2 + b x + c
        return (x > range.lo && x < range.hi) ? OrbitClass::Circular : OrbitClass::Empty;
    }
    const double P = std::sqrt(std::max(disc, 0.0));
    const double x_lo = (Q.b - 2.0 * P) / (2.0 * J2);
    const double x_hi = (Q.b + 2.0 * P) / (2.0 * J2);
    const double lo = std::max(x_lo, range.lo), hi = std::min(x_hi, range.hi);
    if (!(lo < hi)) return OrbitClass::Empty;
    if (x_lo > range.lo && x_hi < range.hi) return OrbitClass::BoundedPeriodic;
    return OrbitClass::ChartEscaping;
}

double radial_period(const BertrandParams& params, double E, double J2) {
    if (!(J2 > 0)) throw RadialOrbit("radial_period needs J2 > 0");
    if (classify_orbit(params, E, J2) != OrbitClass::BoundedPeriodic) {
        throw DegenerateOrbit("radial_period needs a bounded periodic orbit");
    }
    const auto tp = turning_points(params, E, J2);
    const double mid = 0.5 * (tp.substitution_values[0] + tp.substitution_values[1]);
    const double half = 0.5 * (tp.substitution_values[1] - tp.substitution_values[0]);
    // x = mid + half cos(psi) turns dphi = (m/n) dpsi; T = (2m/(nJ)) int_0^pi r^2 dpsi
    const auto integrand = [&](double psi) {
        return subst_to_s(params, mid + half * std::cos(psi));
    };
    double err = 0;
    const double I = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        integrand, 0.0, M_PI, 12, 1e-13, &err);
    return 2.0 * params.m * I / (params.n * std::sqrt(J2));
}

}  // namespace bertrand::orbits
