// spaces.cpp : metric/potential families, domain analysis, quadrature and charts.
#include "bertrand/spaces.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace bertrand::spaces {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

[[noreturn]] void domain_fail(const BertrandParams& params, double s, const char* why) {
    std::ostringstream os;
    os << "radius r = " << std::sqrt(std::max(s, 0.0)) << " outside " << family_name(params.family)
       << " domain (" << why << ")";
    throw DomainError(os.str());
}

// Cancellation-free numerator W + branch*S of the TypeII metric; uses
// W^2 - S^2 = K s^2 to avoid subtracting nearly equal quantities.
double type2_numerator(double W, double S, double K, double s, int branch) {
    if (branch > 0) return W >= 0 ? W + S : (-K * s * s) / (S - W);
    return W >= 0 ? (K * s * s) / (W + S) : W - S;
}

}  // namespace

RadialEval eval_radial(const BertrandParams& params, double s) {
    if (!(s > 0) || !std::isfinite(s)) {
        if (s == 0) throw OriginError("evaluation at r = 0: no chart covers the origin");
        domain_fail(params, s, "r^2 must be positive and finite");
    }
    const double n = params.n, m = params.m, K = params.K, A = params.amplitude;
    RadialEval out;
    if (params.family == Family::TypeI) {
        const double P = 1.0 + K * s;
        if (P <= 0) domain_fail(params, s, "1 + K r^2 <= 0");
        out.h2 = (m * m) / (n * n * P);
        out.dh2_ds = -K * out.h2 / P;
        const double u = std::sqrt(P / s);  // sqrt(1/s + K), positive inside the domain
        out.subst = u;
        out.V = A * u + params.G;
        out.dV_ds = -A / (2.0 * u * s * s);
    } else {
        const double D = params.D();
        const int branch = params.branch();
        const double W = 1.0 - D * s;
        const double R = W * W - K * s * s;
        if (R <= 0) domain_fail(params, s, "radicand (1 - D r^2)^2 - K r^4 <= 0");
        const double S = std::sqrt(R);
        const double N = type2_numerator(W, S, K, s, branch);
        if (N <= 0) domain_fail(params, s, "metric numerator <= 0");
        out.sqrt_radicand = S;
        out.h2 = 2.0 * m * m * N / (n * n * R);
        const double Rp = -2.0 * (D * W + K * s);       // dR/ds
        const double Np = -D + branch * Rp / (2.0 * S); // dN/ds
        out.dh2_ds = (2.0 * m * m / (n * n)) * (Np * R - N * Rp) / (R * R);
        const double v = N / s;
        out.subst = v;
        out.V = params.G - branch * A / v;
        out.dV_ds = -A / (v * s * S);  // branch-independent: branch*A*v'/v^2 with v' = -branch*v/(sS)
    }
    return out;
}

double metric_coeff(const BertrandParams& params, double r) {
    return eval_radial(params, r * r).h2;
}

double potential(const BertrandParams& params, double r) {
    return eval_radial(params, r * r).V;
}

Mat3 metric_tensor(const BertrandParams& params, const Vec3& q) {
    const double s = norm2(q);
    const double h2 = eval_radial(params, s).h2;
    Mat3 g;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) g(i, j) = (i == j ? 1.0 : 0.0) + (h2 - 1.0) * q[i] * q[j] / s;
    return g;
}

namespace {

bool type2_valid(const BertrandParams& params, double s) {
    const double W = 1.0 - params.D() * s;
    const double R = W * W - params.K * s * s;
    if (R <= 0) return false;
    return type2_numerator(W, std::sqrt(R), params.K, s, params.branch()) > 0;
}

RadialDomain type2_domain(const BertrandParams& params) {
    const double K = params.K, D = params.D();
    // Boundary candidates in s = r^2. The radicand (D^2-K)s^2 - 2Ds + 1 has
    // discriminant 4K, so its roots are 1/(D -+ sqrt(K)); the numerator can only
    // vanish interiorly when K = 0 (at W = 0, the same point s = 1/D).
    std::vector<double> cuts;
    if (K > 0) {
        const double rk = std::sqrt(K);
        for (double d : {D + rk, D - rk})
            if (d > 0) cuts.push_back(1.0 / d);
    } else if (K == 0 && D > 0) {
        cuts.push_back(1.0 / D);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::vector<double> bounds{0.0};
    bounds.insert(bounds.end(), cuts.begin(), cuts.end());
    bounds.push_back(kInf);
    for (size_t i = 0; i + 1 < bounds.size(); ++i) {
        const double lo = bounds[i], hi = bounds[i + 1];
        const double probe = std::isfinite(hi) ? 0.5 * (lo + hi) : 2.0 * lo + 1.0;
        if (type2_valid(params, probe))
            return {std::sqrt(lo), std::isfinite(hi) ? std::sqrt(hi) : kInf};
    }
    // Fallback sign scan; catches any rounding pathology at the closed-form cuts.
    for (int i = 0; i < 10000; ++i) {
        const double s = std::pow(10.0, -8.0 + 16.0 * i / 9999.0);
        if (!type2_valid(params, s)) continue;
        double lo = 0.0, hi = kInf;
        for (double c : cuts) {
            if (c < s) lo = std::max(lo, c);
            else hi = std::min(hi, c);
        }
        return {std::sqrt(lo), std::isfinite(hi) ? std::sqrt(hi) : kInf};
    }
    throw EmptyDomain("no radius admits a positive finite TypeII metric for these parameters");
}

}  // namespace

RadialDomain radial_domain(const BertrandParams& params) {
    params.validate();
    if (params.family == Family::TypeI) {
        if (params.K >= 0) return {0.0, kInf};
        return {0.0, 1.0 / std::sqrt(-params.K)};
    }
    return type2_domain(params);
}

QuadratureResult intrinsic_potential(const std::function<double(double)>& h_profile, double r,
                                     double a, double A, double B, PotentialKind kind,
                                     double abs_tol) {
    if (!(r > 0) || !(a > 0)) throw DomainError("intrinsic_potential requires positive r and a");
    const auto integrand = [&](double x) { return h_profile(x) / (x * x); };
    double err = 0;
    double I = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        integrand, std::min(a, r), std::max(a, r), 12, 1e-14, &err);
    if (r < a) I = -I;
    if (!(err <= abs_tol) || !std::isfinite(I)) {
        std::ostringstream os;
        os << "quadrature error estimate " << err << " exceeds tolerance " << abs_tol;
        throw QuadratureFailure(os.str());
    }
    const double inner = I + B;
    if (kind == PotentialKind::Kepler) return {A * inner, std::fabs(A) * err};
    if (std::fabs(inner) < 1e-12 * (std::fabs(I) + std::fabs(B) + 1e-300))
        throw SingularInner("oscillator intrinsic potential: inner expression vanishes");
    const double value = A / (inner * inner);
    return {value, std::fabs(2.0 * value / inner) * err};
}

namespace {

// Richardson-extrapolated central first derivative, O(h^4).
double central_d1(const std::function<double(double)>& f, double x, double h) {
    const double d1 = (f(x + h) - f(x - h)) / (2.0 * h);
    const double d2 = (f(x + 0.5 * h) - f(x - 0.5 * h)) / h;
    return (4.0 * d2 - d1) / 3.0;
}

// Richardson-extrapolated central second derivative; needs a wider step than
// central_d1 because roundoff scales as eps/h^2.
double central_d2(const std::function<double(double)>& f, double x, double h) {
    const double f0 = f(x);
    const auto d2 = [&](double hh) { return (f(x + hh) - 2.0 * f0 + f(x - hh)) / (hh * hh); };
    return (4.0 * d2(0.5 * h) - d2(h)) / 3.0;
}

}  // namespace

double radial_laplacian(const std::function<double(double)>& h_profile,
                        const std::function<double(double)>& u_profile, double r,
                        double rel_step) {
    if (!(r > 0)) throw DomainError("radial_laplacian requires r > 0");
    // (1/(r^2 h)) ((r^2/h) u')' = u''/h^2 + (2/(r h^2) - h'/h^3) u', differentiating
    // each profile once instead of nesting differences.
    const double h = h_profile(r);
    const double hp = central_d1(h_profile, r, rel_step * r);
    const double up = central_d1(u_profile, r, rel_step * r);
    const double upp = central_d2(u_profile, r, std::sqrt(rel_step) * r);
    return upp / (h * h) + (2.0 / (r * h * h) - hp / (h * h * h)) * up;
}

Vec3 to_cartesian(double r, double theta, double phi) {
    if (!(r > 0)) throw OriginError("to_cartesian requires r > 0");
    const double ct = std::cos(theta);
    return {r * ct * std::cos(phi), r * ct * std::sin(phi), r * std::sin(theta)};
}

Spherical from_cartesian(const Vec3& q) {
    const double r = norm(q);
    if (r == 0) throw OriginError("from_cartesian at q = 0");
    return {r, std::asin(std::clamp(q.z / r, -1.0, 1.0)), std::atan2(q.y, q.x)};
}

double RescalingChart::lambda_of_r(double r) const {
    const double s = r * r;
    return 2.0 * s / (a + std::sqrt(a * a + 4.0 * b * s));  // root of b L^2 + a L = s
}

double RescalingChart::rho_of_r(double r) const {
    return std::pow(lambda_of_r(r), double(m) / double(n));
}

double RescalingChart::r_of_rho(double rho) const {
    const double lambda = std::pow(rho, double(n) / double(m));
    return std::sqrt(lambda * (a + b * lambda));
}

Vec3 RescalingChart::Q_of_q(const Vec3& q) const {
    const double r = norm(q);
    if (r == 0) throw OriginError("rescaling chart at q = 0");
    return q * (rho_of_r(r) / r);
}

Vec3 RescalingChart::q_of_Q(const Vec3& Q) const {
    const double rho = norm(Q);
    if (rho == 0) throw OriginError("rescaling chart at Q = 0");
    return Q * (r_of_rho(rho) / rho);
}

double RescalingChart::metric_factor(double rho) const {
    const double e = double(n) / double(m);
    return std::pow(rho, e - 2.0) * (a + b * std::pow(rho, e));
}

namespace {

double arg_or(const std::unordered_map<std::string, double>& args, const std::string& key,
              double fallback) {
    auto it = args.find(key);
    return it == args.end() ? fallback : it->second;
}

void reject_unknown_args(const std::unordered_map<std::string, double>& args,
                         std::initializer_list<const char*> known) {
    for (const auto& [key, value] : args) {
        (void)value;
        if (std::none_of(known.begin(), known.end(),
                         [&](const char* k) { return key == k; }))
            throw std::invalid_argument("unknown example argument: " + key);
    }
}

}  // namespace

NamedExample example_catalog(const std::string& name,
                             const std::unordered_map<std::string, double>& args) {
    if (name == "constant-curvature") {
        reject_unknown_args(args, {"kappa", "attractive"});
        const double kappa = arg_or(args, "kappa", 0.0);
        const double amp = arg_or(args, "attractive", 0.0) != 0.0 ? -1.0 : 1.0;
        const double K = -kappa + 0.0;  // normalize -0
        NamedExample ex;
        ex.name = name;
        std::ostringstream os;
        os << "space of constant curvature kappa=" << kappa
           << ": Kepler-like family (type1 n=m=1 K=" << K
           << ") with oscillator-like companion (type2 n=2 m=1 K=0 D=" << kappa << " branch +1)";
        ex.summary = os.str();
        ex.params = BertrandParams::type1(1, 1, K, 0.0, amp);
        ex.companion = BertrandParams::type2(2, 1, 0.0, kappa, +1, 0.0, amp);
        return ex;
    }
    if (name == "darboux-iii") {
        reject_unknown_args(args, {"k", "attractive"});
        const double k = arg_or(args, "k", 1.0);
        if (!(k > 0)) throw std::invalid_argument("darboux-iii requires k > 0");
        const double amp = arg_or(args, "attractive", 0.0) != 0.0 ? -1.0 : 1.0;
        NamedExample ex;
        ex.name = name;
        std::ostringstream os;
        os << "Darboux III space, k=" << k << ": type2 n=2 m=1 K=4/k^4=" << 4.0 / std::pow(k, 4)
           << " D=-2/k^2=" << -2.0 / (k * k)
           << " branch +1; metric (k+|Q|^2)|dQ|^2 in the rescaled chart";
        ex.summary = os.str();
        ex.params = BertrandParams::type2(2, 1, 4.0 / std::pow(k, 4), -2.0 / (k * k), +1, 0.0, amp);
        ex.transform = RescalingChart{k, 1.0, 2, 1};
        return ex;
    }
    if (name == "multifold-kepler") {
        reject_unknown_args(args, {"a", "b", "n", "m", "attractive"});
        const double a = arg_or(args, "a", 1.0);
        const double b = arg_or(args, "b", 1.0);
        const int n = int(arg_or(args, "n", 2.0));
        const int m = int(arg_or(args, "m", 1.0));
        if (!(a > 0) || !(b > 0)) throw std::invalid_argument("multifold-kepler requires a, b > 0");
        const double amp = arg_or(args, "attractive", 0.0) != 0.0 ? -1.0 : 1.0;
        NamedExample ex;
        ex.name = name;
        const double K = 4.0 * b * b / std::pow(a, 4), D = -2.0 * b / (a * a);
        std::ostringstream os;
        os << "multifold Kepler model a=" << a << " b=" << b << " (n=" << n << ", m=" << m
           << "): type2 K=4b^2/a^4=" << K << " D=-2b/a^2=" << D
           << " branch +1; metric |Q|^{n/m-2}(a+b|Q|^{n/m})|dQ|^2 in the rescaled chart";
        ex.summary = os.str();
        ex.params = BertrandParams::type2(n, m, K, D, +1, 0.0, amp);
        ex.transform = RescalingChart{a, b, n, m};
        return ex;
    }
    throw UnknownExample("unknown example: " + name);
}

std::vector<std::string> example_names() {
    return {"constant-curvature", "darboux-iii", "multifold-kepler"};
}

}  // namespace bertrand::spaces
