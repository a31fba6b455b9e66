#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "bertrand/orbits.hpp"

using namespace bertrand;
using namespace bertrand::orbits;

namespace {

const BertrandParams kRepulsive = BertrandParams::type1(1, 1, 0.0, 0.0, 1.0);
const BertrandParams kKepler = BertrandParams::type1(1, 1, 0.0, 0.0, -1.0);
// Euclidean oscillator: h = 1, V = r^2/2, apsidal angle pi/2.
const BertrandParams kOscillator = BertrandParams::type2(2, 1, 0.0, 0.0, +1, 0.0, -1.0);

double wrap_pi(double x) { return std::remainder(x, 2.0 * M_PI); }

struct BoundedConfig {
    BertrandParams params = kKepler;
    double E = 0, J2 = 0;
    double r_in = 0, r_out = 0;  // turning radii used to seed (E, J2)
};

// Vieta-solve (E, J2) from two prescribed turning radii: both roots of the
// radial quadratic land in the admissible substitution range by construction.
BoundedConfig vieta_bounded(const BertrandParams& params, double fr1, double fr2) {
    const auto dom = spaces::radial_domain(params);
    const double cap = std::isfinite(dom.r_hi) ? dom.r_hi : 2.5;
    BoundedConfig cfg;
    cfg.params = params;
    cfg.r_in = fr1 * cap;
    cfg.r_out = fr2 * cap;
    const double x1 = spaces::eval_radial(params, cfg.r_in * cfg.r_in).subst;
    const double x2 = spaces::eval_radial(params, cfg.r_out * cfg.r_out).subst;
    if (params.family == Family::TypeI) {
        cfg.J2 = -2.0 * params.amplitude / (x1 + x2);
        cfg.E = params.G - 0.5 * cfg.J2 * (x1 * x2 + params.K);
    } else {
        cfg.J2 = -4.0 * params.branch() * params.amplitude / (x1 * x2 - params.K);
        cfg.E = params.G + 0.25 * cfg.J2 * (x1 + x2 + 2.0 * params.D());
    }
    REQUIRE(cfg.J2 > 0);
    return cfg;
}

BertrandParams random_type1(std::mt19937& rng, int n, int m) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    return BertrandParams::type1(n, m, 1.5 * uni(rng) - 0.5, uni(rng) - 0.5, -1.0);
}

BertrandParams random_type2(std::mt19937& rng, int n, int m, int branch) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const double K = branch > 0 ? 2.0 * uni(rng) - 1.0 : 0.3 + 1.2 * uni(rng);
    const double D = branch > 0 ? 1.5 * uni(rng) - 0.5 : 1.4 * uni(rng) - 0.6;
    return BertrandParams::type2(n, m, K, D, branch, uni(rng) - 0.5, -1.0);
}

BoundedConfig random_bounded(std::mt19937& rng, const BertrandParams& params) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    return vieta_bounded(params, 0.25 + 0.2 * uni(rng), 0.55 + 0.25 * uni(rng));
}

dynamics::Trajectory integrate_bounded(const BoundedConfig& cfg, double periods,
                                       int samples = 2000) {
    const double T = radial_period(cfg.params, cfg.E, cfg.J2);
    auto st = dynamics::initial_state_from_constants(cfg.params, cfg.E, cfg.J2,
                                                     0.5 * (cfg.r_in + cfg.r_out));
    dynamics::IntegratorSettings settings;
    settings.samples = samples;
    auto traj = dynamics::integrate(cfg.params, st, periods * T, settings);
    REQUIRE(traj.status == dynamics::ExitStatus::Completed);
    return traj;
}

const std::pair<int, int> kWindingPairs[] = {{1, 1}, {2, 1}, {1, 2}, {3, 2}};

}  // namespace

TEST_CASE("chi closed-form values") {
    const double r = 1.0 + std::sqrt(2.0);
    CHECK(chi(kRepulsive, r * r, 1.0, 0.5) == doctest::Approx(1.0).epsilon(1e-12));
    // u -> 0 limit of (1+u)/sqrt(2)
    CHECK(chi(kRepulsive, 1e16, 1.0, 0.5) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-7));

    // J2 = 0: sign of the amplitude (TypeI identically; TypeII for attractive data,
    // where any radial orbit has E above the inner potential limit G)
    CHECK(chi(kRepulsive, 4.0, 0.0, 0.5) == doctest::Approx(1.0));
    CHECK(chi(kKepler, 4.0, 0.0, -0.1) == doctest::Approx(-1.0));
    const auto t2 = BertrandParams::type2(2, 1, 0.3, 0.1, +1, 0.7, -1.0);
    CHECK(chi(t2, 0.5, 0.0, 0.7 + 0.5) == doctest::Approx(-1.0));

    CHECK_THROWS_AS(chi(kKepler, 1.0, 4.0, -3.0 / 8.0), DegenerateOrbit);
}

TEST_CASE("chi_d1 closed form matches finite differences") {
    CHECK(chi_d1(kRepulsive, 1.0, 1.0, 0.5) ==
          doctest::Approx(-1.0 / (2.0 * std::sqrt(2.0))).epsilon(1e-13));
    CHECK(chi_d1(kRepulsive, 2.5, 0.0, 0.5) == 0.0);

    std::mt19937 rng(211);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        BertrandParams params = kKepler;
        switch (i % 3) {
            case 0: params = random_type1(rng, 1, 1); break;
            case 1: params = random_type2(rng, 2, 1, +1); break;
            default: params = random_type2(rng, 2, 1, -1); break;
        }
        const auto cfg = random_bounded(rng, params);
        const double r = 0.5 * (cfg.r_in + cfg.r_out), s = r * r;
        const double h = 1e-5 * s;
        const double fd =
            (chi(params, s + h, cfg.J2, cfg.E) - chi(params, s - h, cfg.J2, cfg.E)) / (2.0 * h);
        const double d1 = chi_d1(params, s, cfg.J2, cfg.E);
        CHECK(fd == doctest::Approx(d1).epsilon(1e-7));
    }
}

TEST_CASE("radial_rate") {
    CHECK(radial_rate(kRepulsive, {{0, 0, 2}, {0, 0, 3}}) == doctest::Approx(6.0).epsilon(1e-14));
    // m = 2 doubles h^2 at every radius
    CHECK(radial_rate(BertrandParams::type1(1, 2, 0.0), {{0, 0, 2}, {0, 0, 3}}) ==
          doctest::Approx(1.5).epsilon(1e-14));
}

TEST_CASE("theta vanishes at turning points and at J = 0") {
    CHECK(theta(kKepler, 0.0, 1.44, 1.0, -3.0 / 8.0) == 0.0);
    CHECK(theta(kKepler, 0.37, 1.44, 0.0, -0.2) == 0.0);
}

TEST_CASE("chi and theta parameterize the orbit angle along a Kepler trajectory") {
    const dynamics::PhaseState peri{{2.0 / 3.0, 0, 0}, {0, 1.5, 0}};
    dynamics::IntegratorSettings settings;
    settings.samples = 4000;
    const auto traj = dynamics::integrate(kKepler, peri, 20.0, settings);
    const auto constants = fit_phi0(kKepler, traj);
    CHECK(std::fabs(constants.phi0) < 1e-8);  // perihelion launch on the reference axis

    int theta_flips = 0, rrdot_flips = 0;
    double prev_theta = 0, prev_rrdot = 0;
    for (const auto& smp : traj.samples) {
        const double s = smp.r * smp.r;
        const double c = chi(kKepler, s, constants.J2, constants.E);
        const double rr = radial_rate(kKepler, smp.state);
        const double th = theta(kKepler, rr, s, traj.J_signed, constants.E);
        const double angle = smp.phi_unwrapped - constants.phi0;  // n = m = 1
        CHECK(std::fabs(std::sin(angle) - th) < 1e-7);
        CHECK(std::fabs(std::cos(angle) - c) < 1e-7);
        CHECK(std::fabs(c * c + th * th - 1.0) < 1e-7);
        if (th * prev_theta < 0) ++theta_flips;
        if (rr * prev_rrdot < 0) ++rrdot_flips;
        prev_theta = th;
        prev_rrdot = rr;
    }
    CHECK(theta_flips > 2);
    CHECK(theta_flips == rrdot_flips);  // sign changes exactly at the radial turnings
}

TEST_CASE("orbit_residual accepts fitted constants and rejects shifted phi0") {
    const auto cfg = vieta_bounded(kKepler, 0.3, 0.7);
    const auto traj = integrate_bounded(cfg, 1.6);
    auto constants = fit_phi0(kKepler, traj);
    CHECK(orbit_residual(kKepler, traj, constants) < 1e-6);

    constants.phi0 += 0.1;
    const double res = orbit_residual(kKepler, traj, constants);
    CHECK(res > 0.09);
    CHECK(res < 0.11);  // max |cos(x - 0.1) - cos x| = 2 sin(0.05)

    constants.phi0 -= 0.1;
    constants.E -= 1.0;  // inconsistent energy: discriminant goes negative
    CHECK(orbit_residual(kKepler, traj, constants) == INFINITY);
}

TEST_CASE("circular orbit: trivial residual, no turning events") {
    // V = -1/r at r = 1 with J2 = 1: E = -1/2, double root of the radial quadratic
    const auto traj = dynamics::integrate(kKepler, {{1, 0, 0}, {0, 1, 0}}, 10.0);
    CHECK(classify_orbit(kKepler, -0.5, 1.0) == OrbitClass::Circular);
    const auto constants = fit_phi0(kKepler, traj);
    CHECK(constants.phi0 == 0.0);
    CHECK(orbit_residual(kKepler, traj, constants) == 0.0);
    CHECK_THROWS_AS(apsidal_angle(traj), InsufficientTurningPoints);
}

TEST_CASE("fit_phi0 equivariance under rotations about the orbit normal") {
    std::mt19937 rng(59);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (const auto& params : {kKepler, kOscillator}) {
        const auto cfg = vieta_bounded(params, 0.32, 0.74);
        const auto st = dynamics::initial_state_from_constants(params, cfg.E, cfg.J2,
                                                               0.5 * (cfg.r_in + cfg.r_out));
        const auto base = fit_phi0(params, dynamics::integrate(params, st, 6.0));
        for (int i = 0; i < 4; ++i) {
            const double dphi = 2.0 * M_PI * uni(rng) - M_PI;
            const Mat3 rot = rotation_about({0, 0, 1}, dphi);
            const auto turned =
                fit_phi0(params, dynamics::integrate(params, {rot * st.q, rot * st.p}, 6.0));
            const double want = double(params.n) / double(params.m) * dphi;
            CHECK(std::fabs(wrap_pi(turned.phi0 - base.phi0 - want)) < 1e-8);
        }
    }
}

TEST_CASE("fit_phi0 on a radial orbit") {
    const auto traj = dynamics::integrate(kKepler, {{1, 0, 0}, {0.3, 0, 0}}, 0.8);
    CHECK(traj.radial);
    const auto constants = fit_phi0(kKepler, traj);
    CHECK(constants.J2 == 0.0);
    CHECK(orbit_residual(kKepler, traj, constants) < 1e-12);
}

TEST_CASE("turning_points closed-form examples") {
    const auto one = turning_points(kRepulsive, 0.5, 1.0);
    REQUIRE(one.count == 1);
    CHECK(one.substitution_values[0] == doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-12));
    CHECK(one.radii[0] == doctest::Approx(1.0 + std::sqrt(2.0)).epsilon(1e-12));

    const auto two = turning_points(kKepler, -3.0 / 8.0, 1.0);
    REQUIRE(two.count == 2);
    CHECK(two.substitution_values[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(two.substitution_values[1] == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(two.radii[0] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(two.radii[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));

    CHECK_THROWS_AS(turning_points(kKepler, -3.0 / 8.0, 4.0), DegenerateOrbit);
}

TEST_CASE("turning points zero the radial quadratic and bound integrated radii") {
    std::mt19937 rng(401);
    for (int i = 0; i < 12; ++i) {
        BertrandParams params = kKepler;
        switch (i % 3) {
            case 0: params = random_type1(rng, 1, 1); break;
            case 1: params = random_type2(rng, 2, 1, +1); break;
            default: params = random_type2(rng, 2, 1, -1); break;
        }
        const auto cfg = random_bounded(rng, params);
        const auto tp = turning_points(params, cfg.E, cfg.J2);
        REQUIRE(tp.count == 2);
        for (int k = 0; k < 2; ++k) {
            const double x = tp.substitution_values[k];
            double q, scale;
            if (params.family == Family::TypeI) {
                q = 2.0 * (cfg.E - params.G) + params.K * cfg.J2 - 2.0 * params.amplitude * x -
                    cfg.J2 * x * x;
                scale = std::fabs(cfg.J2 * x * x) + std::fabs(2.0 * params.amplitude * x) + 1.0;
            } else {
                q = 4.0 * (cfg.E - params.G) * x - cfg.J2 * (x * x + 2.0 * params.D() * x + params.K) +
                    4.0 * params.branch() * params.amplitude;
                scale = std::fabs(cfg.J2 * x * x) + std::fabs(4.0 * (cfg.E - params.G) * x) + 1.0;
            }
            CHECK(std::fabs(q) < 1e-10 * scale);
        }
        double radii[2] = {tp.radii[0], tp.radii[1]};
        std::sort(radii, radii + 2);
        CHECK(radii[0] == doctest::Approx(cfg.r_in).epsilon(1e-10));
        CHECK(radii[1] == doctest::Approx(cfg.r_out).epsilon(1e-10));
    }
}

TEST_CASE("turning radii match the extremes of densely sampled trajectories") {
    for (const auto& params : {kKepler, kOscillator}) {
        const auto cfg = vieta_bounded(params, 0.3, 0.72);
        const auto traj = integrate_bounded(cfg, 2.2, 30000);
        double rmin = INFINITY, rmax = 0;
        for (const auto& smp : traj.samples) {
            rmin = std::min(rmin, smp.r);
            rmax = std::max(rmax, smp.r);
        }
        const auto tp = turning_points(params, cfg.E, cfg.J2);
        REQUIRE(tp.count == 2);
        const double lo = std::min(tp.radii[0], tp.radii[1]);
        const double hi = std::max(tp.radii[0], tp.radii[1]);
        CHECK(std::fabs(rmin - lo) < 1e-7);
        CHECK(std::fabs(rmax - hi) < 1e-7);
    }
}

TEST_CASE("solve_r_of_phi") {
    OrbitConstants constants;
    constants.E = 0.5;
    constants.J2 = 1.0;
    constants.phi0 = 0.3;
    const auto peri = solve_r_of_phi(kRepulsive, constants, 0.3);
    REQUIRE(peri.has_value());
    CHECK(*peri == doctest::Approx(1.0 + std::sqrt(2.0)).epsilon(1e-12));
    // cos below the attainable chi range on the repulsive branch
    CHECK_FALSE(solve_r_of_phi(kRepulsive, constants, 0.3 + M_PI).has_value());

    constants.J2 = 0.0;
    CHECK_THROWS_AS(solve_r_of_phi(kRepulsive, constants, 0.0), RadialOrbit);
    constants.J2 = 4.0;
    constants.E = -3.0 / 8.0;
    CHECK_THROWS_AS(solve_r_of_phi(kKepler, constants, 0.0), DegenerateOrbit);
}

TEST_CASE("solve_r_of_phi reproduces integrated orbits on a phi grid") {
    for (const auto& params : {kKepler, kOscillator}) {
        const auto cfg = vieta_bounded(params, 0.35, 0.68);
        const auto traj = integrate_bounded(cfg, 1.8, 4000);
        const auto constants = fit_phi0(params, traj);
        for (const auto& smp : traj.samples) {
            const auto r = solve_r_of_phi(params, constants, smp.phi_unwrapped);
            REQUIRE(r.has_value());
            CHECK(std::fabs(*r - smp.r) < 1e-6);
        }
    }
}

TEST_CASE("apsidal angle of the classical closed orbits") {
    double unc = 0;
    const auto kepler = integrate_bounded(vieta_bounded(kKepler, 0.28, 0.75), 2.3, 4000);
    CHECK(apsidal_angle(kepler, &unc) == doctest::Approx(M_PI).epsilon(1e-6));
    CHECK(unc < 1e-6);

    const auto osc = integrate_bounded(vieta_bounded(kOscillator, 0.3, 0.7), 2.3, 4000);
    CHECK(apsidal_angle(osc, &unc) == doctest::Approx(M_PI / 2.0).epsilon(1e-6));
    CHECK(unc < 1e-6);
}

TEST_CASE("apsidal angle equals m pi / n across winding pairs and families") {
    std::mt19937 rng(613);
    for (const auto& [n, m] : kWindingPairs) {
        for (int branch : {+1, -1}) {
            const auto params = random_type2(rng, n, m, branch);
            const auto cfg = random_bounded(rng, params);
            const auto traj = integrate_bounded(cfg, 2.4, 4000);
            const double want = m * M_PI / n;
            CHECK(apsidal_angle(traj) == doctest::Approx(want).epsilon(1e-5 / want));
        }
        const auto params = random_type1(rng, n, m);
        const auto cfg = random_bounded(rng, params);
        const auto traj = integrate_bounded(cfg, 2.4, 4000);
        const double want = m * M_PI / n;
        CHECK(apsidal_angle(traj) == doctest::Approx(want).epsilon(1e-5 / want));
    }
}

TEST_CASE("orbit classification") {
    CHECK(classify_orbit(kKepler, -3.0 / 8.0, 1.0) == OrbitClass::BoundedPeriodic);
    CHECK(classify_orbit(kRepulsive, 0.5, 1.0) == OrbitClass::ChartEscaping);
    CHECK(classify_orbit(kKepler, -3.0 / 8.0, 0.0) == OrbitClass::Radial);
    CHECK(classify_orbit(kKepler, -0.5, 1.0) == OrbitClass::Circular);
    CHECK(classify_orbit(kKepler, -3.0 / 8.0, 4.0) == OrbitClass::Empty);

    // closed chart boundary at r = 2: positive-energy orbit runs into it
    const auto closed = BertrandParams::type1(1, 1, -0.25, 0.0, -1.0);
    CHECK(classify_orbit(closed, 0.2, 0.5) == OrbitClass::ChartEscaping);
    const auto st = dynamics::initial_state_from_constants(closed, 0.2, 0.5, 1.0);
    CHECK(dynamics::integrate(closed, st, 50.0).status == dynamics::ExitStatus::ChartExit);

    CHECK(std::string(orbit_class_name(OrbitClass::BoundedPeriodic)) == "bounded-periodic");
    CHECK(std::string(orbit_class_name(OrbitClass::Empty)) == "empty");
}

TEST_CASE("orbit equation holds with fitted constants across randomized cases") {
    std::mt19937 rng(787);
    std::uniform_int_distribution<int> pick(0, 3);
    auto run = [&](const BertrandParams& params) {
        const auto cfg = random_bounded(rng, params);
        const auto traj = integrate_bounded(cfg, 1.5);
        const auto constants = fit_phi0(params, traj);
        CHECK(orbit_residual(params, traj, constants) < 1e-6);
        const double ratio = double(params.n) / double(params.m);
        for (const auto& smp : traj.samples) {
            const double s = smp.r * smp.r;
            const double c = chi(params, s, constants.J2, constants.E);
            const double th = theta(params, radial_rate(params, smp.state), s, traj.J_signed,
                                    constants.E);
            CHECK(std::fabs(c * c + th * th - 1.0) < 1e-7);
            CHECK(std::fabs(std::sin(ratio * smp.phi_unwrapped - constants.phi0) - th) < 1e-6);
        }
    };
    for (int i = 0; i < 10; ++i) {
        const auto [n, m] = kWindingPairs[pick(rng)];
        run(random_type1(rng, n, m));
        run(random_type2(rng, n, m, +1));
        run(random_type2(rng, n, m, -1));
    }
}

TEST_CASE("bounded orbits close after n radial periods") {
    std::mt19937 rng(997);
    const BertrandParams cases[] = {kKepler, kOscillator, random_type2(rng, 3, 2, +1)};
    for (const auto& params : cases) {
        const auto cfg = vieta_bounded(params, 0.3, 0.7);
        const double T = radial_period(params, cfg.E, cfg.J2);
        const auto st = dynamics::initial_state_from_constants(params, cfg.E, cfg.J2,
                                                               0.5 * (cfg.r_in + cfg.r_out));
        const auto traj = dynamics::integrate(params, st, params.n * T);
        REQUIRE(traj.status == dynamics::ExitStatus::Completed);
        const auto& last = traj.samples.back().state;
        CHECK(max_abs(last.q - st.q) < 1e-5);
        CHECK(max_abs(last.p - st.p) < 1e-5);
        // total azimuth advance of a closed orbit: 2 pi m
        CHECK(std::fabs(traj.samples.back().phi_unwrapped - 2.0 * M_PI * params.m) < 1e-5);
    }
}

TEST_CASE("radial period") {
    // Kepler: T = 2 pi a^{3/2} with a = -1/(2E)
    const double a = 4.0 / 3.0;
    CHECK(radial_period(kKepler, -3.0 / 8.0, 1.0) ==
          doctest::Approx(2.0 * M_PI * std::pow(a, 1.5)).epsilon(1e-12));
    // Euclidean oscillator: T = pi for V = r^2/2 regardless of (E, J2)
    const auto cfg = vieta_bounded(kOscillator, 0.4, 0.8);
    CHECK(radial_period(kOscillator, cfg.E, cfg.J2) == doctest::Approx(M_PI).epsilon(1e-12));

    CHECK_THROWS_AS(radial_period(kKepler, -3.0 / 8.0, 0.0), RadialOrbit);
    CHECK_THROWS_AS(radial_period(kRepulsive, 0.5, 1.0), DegenerateOrbit);
}
