// dynamics.cpp : Hamiltonian flow in the rectangular chart.
#include "bertrand/dynamics.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace bertrand::dynamics {

namespace {

using State6 = std::array<double, 6>;

State6 pack(const PhaseState& s) {
    return {s.q.x, s.q.y, s.q.z, s.p.x, s.p.y, s.p.z};
}

PhaseState unpack(const State6& x) {
    return {{x[0], x[1], x[2]}, {x[3], x[4], x[5]}};
}

// Kinetic shape factors: g = 1/h^2 - 1, f = g/s, fp = df/ds; the Hamiltonian
// is |p|^2/2 + f(s)(q.p)^2/2 + V(s).
struct Kinetic {
    double g, f, fp, dV_ds;
};

Kinetic kinetic(const BertrandParams& params, double s) {
    const auto ev = spaces::eval_radial(params, s);
    Kinetic k;
    k.g = 1.0 / ev.h2 - 1.0;
    k.f = k.g / s;
    k.fp = -ev.dh2_ds / (ev.h2 * ev.h2 * s) - k.f / s;
    k.dV_ds = ev.dV_ds;
    return k;
}

}  // namespace

double hamiltonian(const BertrandParams& params, const PhaseState& state) {
    const double s = norm2(state.q);
    const auto ev = spaces::eval_radial(params, s);
    const double c = dot(state.q, state.p);
    return 0.5 * (norm2(state.p) + (1.0 / ev.h2 - 1.0) * c * c / s) + ev.V;
}

Vec3 velocity_map(const BertrandParams& params, const Vec3& q, const Vec3& p) {
    const double s = norm2(q);
    const auto ev = spaces::eval_radial(params, s);
    return p + ((1.0 / ev.h2 - 1.0) * dot(q, p) / s) * q;
}

std::pair<Vec3, Vec3> eom(const BertrandParams& params, const PhaseState& state) {
    const double s = norm2(state.q);
    const auto k = kinetic(params, s);
    const double c = dot(state.q, state.p);
    const Vec3 dq = state.p + (k.g * c / s) * state.q;  // same expression as velocity_map
    const Vec3 dp = -(k.fp * c * c + 2.0 * k.dV_ds) * state.q - (k.f * c) * state.p;
    return {dq, dp};
}

ConservedSet conserved(const BertrandParams& params, const PhaseState& state) {
    ConservedSet out;
    out.E = hamiltonian(params, state);
    out.L = cross(state.q, state.p);
    out.J2 = dot(out.L, out.L);
    return out;
}

PlanarFrame rotate_to_plane(const PhaseState& state) {
    PlanarFrame out;
    const Vec3 L = cross(state.q, state.p);
    const double J = norm(L);
    const double scale = std::max(norm(state.q), 1.0) * std::max(norm(state.p), 1.0);
    if (J <= 1e-14 * scale) {
        // radial data: put the line of motion on the x axis
        out.rotation = rotation_between(state.q / norm(state.q), Vec3{1, 0, 0});
        out.radial = true;
    } else if (std::fabs(state.q.z) <= 1e-14 * norm(state.q) &&
               std::fabs(state.p.z) <= 1e-14 * std::max(norm(state.p), 1e-300)) {
        out.rotation = Mat3::identity();  // already planar, retrograde keeps J < 0
    } else {
        out.rotation = rotation_between(L / J, Vec3{0, 0, 1});
    }
    out.state = {out.rotation * state.q, out.rotation * state.p};
    out.J = cross(out.state.q, out.state.p).z;
    return out;
}

namespace {

struct GuardBounds {
    double lo = 0, hi = 0;  // chart-exit radii; lo may be 0 (no inner bound hit)
};

GuardBounds guard_bounds(const RadialDomain& dom, double r0, double guard) {
    GuardBounds g;
    g.lo = dom.r_lo > 0 ? dom.r_lo * (1.0 + guard) : guard * r0;
    g.hi = std::isfinite(dom.r_hi) ? dom.r_hi * (1.0 - guard)
                                   : std::numeric_limits<double>::infinity();
    return g;
}

double wrap_delta(double prev, double now) {
    double d = now - prev;
    while (d > M_PI) d -= 2.0 * M_PI;
    while (d < -M_PI) d += 2.0 * M_PI;
    return d;
}

// Shared sampling/audit bookkeeping for both engines.
struct Recorder {
    Trajectory* traj;
    double phi = 0;
    double phi_raw_prev = 0;

    explicit Recorder(Trajectory* t, const PhaseState& s0) : traj(t) {
        const Vec3 qp = t->plane_rotation * s0.q;
        phi = phi_raw_prev = std::atan2(qp.y, qp.x);
        push(0.0, s0);
    }

    // advances the unwrapped azimuth; call once per accepted step
    void track(const PhaseState& s) {
        const Vec3 qp = traj->plane_rotation * s.q;
        const double raw = std::atan2(qp.y, qp.x);
        phi += wrap_delta(phi_raw_prev, raw);
        phi_raw_prev = raw;
    }

    void push(double t, const PhaseState& s) {
        TrajectorySample smp;
        smp.t = t;
        smp.state = s;
        smp.r = norm(s.q);
        smp.phi_unwrapped = phi;
        traj->samples.push_back(smp);
        const auto c = conserved(traj->params, s);
        const auto& c0 = traj->conserved0;
        traj->drift_energy = std::max(traj->drift_energy,
                                      std::fabs(c.E - c0.E) / std::max(1.0, std::fabs(c0.E)));
        traj->drift_angmom = std::max(traj->drift_angmom, max_abs(c.L - c0.L));
    }
};

}  // namespace

Trajectory integrate(const BertrandParams& params, const PhaseState& state0, double t_end,
                     const IntegratorSettings& settings) {
    if (!(t_end > 0)) throw std::invalid_argument("integrate requires t_end > 0");
    if (settings.samples < 1) throw std::invalid_argument("integrate requires samples >= 1");

    Trajectory traj;
    traj.params = params;
    traj.settings = settings;
    traj.conserved0 = conserved(params, state0);
    const auto frame = rotate_to_plane(state0);
    traj.plane_rotation = frame.rotation;
    traj.J_signed = frame.J;
    traj.radial = frame.radial;

    const auto dom = spaces::radial_domain(params);
    const auto guard = guard_bounds(dom, norm(state0.q), settings.guard_band);

    auto sys = [&](const State6& x, State6& dxdt, double) {
        const auto [dq, dp] = eom(params, unpack(x));
        dxdt = {dq.x, dq.y, dq.z, dp.x, dp.y, dp.z};
    };

    namespace ode = boost::numeric::odeint;
    auto stepper =
        ode::make_controlled(settings.atol, settings.rtol, ode::runge_kutta_fehlberg78<State6>());

    State6 x = pack(state0);
    double t = 0;
    const double sample_dt = t_end / settings.samples;
    double dt = settings.dt_init > 0 ? settings.dt_init : sample_dt / 16.0;
    const double dt_floor = settings.dt_floor_rel * t_end;

    Recorder rec(&traj, state0);

    for (int i = 1; i <= settings.samples; ++i) {
        const double t_target = t_end * i / settings.samples;
        while (t < t_target * (1.0 - 1e-15)) {
            const double dt_try = std::min(dt, t_target - t);
            const State6 x_prev = x;
            bool domain_hit = false;
            ode::controlled_step_result res = ode::controlled_step_result::fail;
            try {
                double dt_io = dt_try;
                res = stepper.try_step(sys, x, t, dt_io);
                if (res == ode::controlled_step_result::success) {
                    // keep the controller's suggestion, except across sample clamps
                    dt = dt_try < dt ? std::max(dt, dt_io) : dt_io;
                } else {
                    dt = dt_io;  // controller already shrank it
                }
            } catch (const DomainError&) {
                domain_hit = true;
                dt = 0.5 * dt_try;
            }
            if (domain_hit) {
                if (dt < dt_floor) {
                    if (!traj.samples.empty() && traj.samples.back().t < t) {
                        rec.push(t, unpack(x));
                    }
                    traj.status = ExitStatus::ChartExit;
                    return traj;
                }
                continue;
            }
            if (res == ode::controlled_step_result::fail) {
                if (dt < dt_floor) {
                    std::ostringstream os;
                    os << "step size underflow at t = " << t << " (tolerance unreachable)";
                    throw StepFailure(os.str());
                }
                continue;
            }
            const PhaseState cur = unpack(x);
            const double r = norm(cur.q);
            // the azimuth unwrap needs |delta| < pi per step; retry shorter on fast sweeps
            const Vec3 qp = traj.plane_rotation * cur.q;
            const double raw = std::atan2(qp.y, qp.x);
            if (std::fabs(wrap_delta(rec.phi_raw_prev, raw)) > 0.5 * M_PI) {
                x = x_prev;
                t -= dt_try;  // try_step advanced t by dt_try
                dt = 0.25 * dt_try;
                continue;
            }
            rec.track(cur);
            if (r <= guard.lo || r >= guard.hi) {
                rec.push(t, cur);
                traj.status = ExitStatus::ChartExit;
                return traj;
            }
        }
        rec.push(t, unpack(x));
    }
    return traj;
}

Trajectory integrate_implicit_midpoint(const BertrandParams& params, const PhaseState& state0,
                                       double t_end, double dt, int samples) {
    if (!(t_end > 0) || !(dt > 0)) {
        throw std::invalid_argument("integrate_implicit_midpoint requires t_end, dt > 0");
    }
    Trajectory traj;
    traj.params = params;
    traj.settings.samples = samples;
    traj.settings.dt_init = dt;
    traj.conserved0 = conserved(params, state0);
    const auto frame = rotate_to_plane(state0);
    traj.plane_rotation = frame.rotation;
    traj.J_signed = frame.J;
    traj.radial = frame.radial;

    const auto dom = spaces::radial_domain(params);
    const auto guard = guard_bounds(dom, norm(state0.q), traj.settings.guard_band);

    const long nsteps = std::max<long>(1, std::lround(std::ceil(t_end / dt)));
    const double h = t_end / double(nsteps);
    const long stride = std::max<long>(1, nsteps / std::max(1, samples));

    auto rhs = [&](const PhaseState& s) {
        const auto [dq, dp] = eom(params, s);
        return PhaseState{dq, dp};
    };

    Recorder rec(&traj, state0);
    PhaseState cur = state0;
    for (long k = 1; k <= nsteps; ++k) {
        // fixed-point iteration on x1 = x0 + h F((x0+x1)/2)
        PhaseState next = cur;
        bool converged = false;
        for (int it = 0; it < 64; ++it) {
            PhaseState mid{(cur.q + next.q) * 0.5, (cur.p + next.p) * 0.5};
            PhaseState f;
            try {
                f = rhs(mid);
            } catch (const DomainError&) {
                if (traj.samples.back().t < (double(k - 1) - 0.5) * h) {
                    rec.push(double(k - 1) * h, cur);
                }
                traj.status = ExitStatus::ChartExit;
                return traj;
            }
            const PhaseState cand{cur.q + f.q * h, cur.p + f.p * h};
            const double delta = std::max(max_abs(cand.q - next.q), max_abs(cand.p - next.p));
            next = cand;
            if (delta < 1e-14 * (1.0 + max_abs(next.q) + max_abs(next.p))) {
                converged = true;
                break;
            }
        }
        if (!converged) {
            std::ostringstream os;
            os << "implicit midpoint iteration stalled at t = " << double(k - 1) * h
               << " (reduce dt)";
            throw StepFailure(os.str());
        }
        cur = next;
        rec.track(cur);
        const double r = norm(cur.q);
        if (r <= guard.lo || r >= guard.hi) {
            rec.push(double(k) * h, cur);
            traj.status = ExitStatus::ChartExit;
            return traj;
        }
        if (k % stride == 0 || k == nsteps) rec.push(double(k) * h, cur);
    }
    return traj;
}

PhaseState initial_state_from_constants(const BertrandParams& params, double E, double J2,
                                        double r, bool inward) {
    if (!(r > 0) || J2 < 0) {
        throw std::invalid_argument("initial_state_from_constants requires r > 0 and J2 >= 0");
    }
    const auto ev = spaces::eval_radial(params, r * r);
    const double radicand = ev.h2 * (2.0 * (E - ev.V) - J2 / (r * r));
    if (radicand < 0) {
        std::ostringstream os;
        os << "radius " << r << " is not between the turning radii of (E, J2) = (" << E << ", "
           << J2 << ")";
        throw DomainError(os.str());
    }
    const double pr = (inward ? -1.0 : 1.0) * std::sqrt(radicand);
    return {{r, 0, 0}, {pr, std::sqrt(J2) / r, 0}};
}

}  // namespace bertrand::dynamics
