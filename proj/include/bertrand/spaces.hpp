// spaces.hpp : Bertrand space geometry: metric families, radial domain, potentials,
// radial Laplacian, the rectangular chart, and the named example catalog.
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "bertrand/errors.hpp"
#include "bertrand/params.hpp"
#include "bertrand/vec3.hpp"

namespace bertrand::spaces {

// Joint evaluation of h^2, V and their derivatives with respect to s = r^2.
// Shares the algebra between metric and potential; everything downstream
// (equations of motion, orbit functions) consumes this.
struct RadialEval {
    double h2 = 0;             // metric coefficient h(r)^2
    double dh2_ds = 0;         // d(h^2)/ds
    double V = 0;              // potential V(r)
    double dV_ds = 0;          // dV/ds
    double subst = 0;          // u = sqrt(1/s + K) (TypeI) or v = (W + branch*S)/s (TypeII)
    double sqrt_radicand = 0;  // TypeII: S = sqrt((1 - D s)^2 - K s^2); unused for TypeI
};

// Throws DomainError when s = r^2 lies outside the open radial domain.
RadialEval eval_radial(const BertrandParams& params, double s);

double metric_coeff(const BertrandParams& params, double r);  // h(r)^2
double potential(const BertrandParams& params, double r);     // V(r)

RadialDomain radial_domain(const BertrandParams& params);

// Metric tensor in the rectangular chart: delta_ij + (h^2 - 1) q_i q_j / |q|^2.
Mat3 metric_tensor(const BertrandParams& params, const Vec3& q);

enum class PotentialKind { Kepler, Oscillator };

struct QuadratureResult {
    double value = 0;
    double abs_error = 0;
};

// Kepler: A (I(r) + B); Oscillator: A (I(r) + B)^-2, with I(r) = integral_a^r h(x)/x^2 dx.
QuadratureResult intrinsic_potential(const std::function<double(double)>& h_profile, double r,
                                     double a, double A, double B, PotentialKind kind,
                                     double abs_tol = 1e-12);

// (1/(r^2 h)) d/dr ( (r^2/h) du/dr ), Richardson-extrapolated central differences.
double radial_laplacian(const std::function<double(double)>& h_profile,
                        const std::function<double(double)>& u_profile, double r,
                        double rel_step = 1e-5);

struct Spherical {
    double r = 0, theta = 0, phi = 0;
};

// q = (r cos(theta) cos(phi), r cos(theta) sin(phi), r sin(theta)).
Vec3 to_cartesian(double r, double theta, double phi);
Spherical from_cartesian(const Vec3& q);

// Radial rescaling chart Q = (rho(r)/r) q with rho = lambda^{m/n} and
// lambda (a + b lambda) = r^2; covers the Darboux-III and multifold-Kepler frames.
struct RescalingChart {
    double a = 1.0;
    double b = 1.0;
    int n = 2;
    int m = 1;

    double lambda_of_r(double r) const;
    double rho_of_r(double r) const;
    double r_of_rho(double rho) const;
    Vec3 Q_of_q(const Vec3& q) const;
    Vec3 q_of_Q(const Vec3& Q) const;
    // Conformal coefficient of the metric in Q coordinates: rho^{n/m-2} (a + b rho^{n/m}).
    double metric_factor(double rho) const;
};

struct NamedExample {
    std::string name;
    std::string summary;
    BertrandParams params;
    std::optional<BertrandParams> companion;    // oscillator partner of the constant-curvature pair
    std::optional<RescalingChart> transform;
};

// Recognized names: "constant-curvature" (args: kappa, attractive), "darboux-iii"
// (args: k, attractive), "multifold-kepler" (args: a, b, n, m, attractive).
NamedExample example_catalog(const std::string& name,
                             const std::unordered_map<std::string, double>& args = {});
std::vector<std::string> example_names();

}  // namespace bertrand::spaces
