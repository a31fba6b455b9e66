// runge_lenz.cpp : phase lifting, cover bookkeeping and the conserved vector/tensor.
#include "bertrand/runge_lenz.hpp"

#include <cmath>
#include <sstream>

namespace bertrand::runge_lenz {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

int positive_mod(long long a, int n) {
    const long long r = a % n;
    return int(r < 0 ? r + n : r);
}

int sector_of(double phi, int n) {
    return positive_mod((long long)std::floor(phi * n / kTwoPi), n);
}

double multinomial(int order, int i, int j, int k) {
    double v = 1;
    int next = 1;
    for (int block : {i, j, k}) {
        for (int t = 1; t <= block; ++t) v *= double(next++) / double(t);
    }
    (void)order;
    return v;
}

// cos(psi) rhat - sin(psi) phihat in the plane frame, psi = Phi - m phi0 / n,
// rotated back to the world frame.
Vec3 assemble_vector(const BertrandParams& params, const dynamics::PlanarFrame& frame,
                     double cos_phi, double sin_phi, double phi0) {
    const double shift = params.m * phi0 / params.n;
    const double cpsi = cos_phi * std::cos(shift) + sin_phi * std::sin(shift);
    const double spsi = sin_phi * std::cos(shift) - cos_phi * std::sin(shift);
    const Vec3 q = frame.state.q;
    const Vec3 rhat = q * (1.0 / norm(q));
    const Vec3 phihat = cross({0, 0, 1}, rhat);
    const Vec3 planar = rhat * cpsi - phihat * spsi;
    return frame.rotation.transpose() * planar;
}

}  // namespace

int SymmetricTensor::index(int order, int i, int j, int k) {
    if (i < 0 || j < 0 || k < 0 || i + j + k != order) {
        throw std::out_of_range("symmetric tensor multidegree does not match the order");
    }
    const int d = order - i;
    return d * (d + 1) / 2 + (d - j);
}

double SymmetricTensor::at(int i, int j, int k) const {
    return components[index(order, i, j, k)];
}

double chebyshev_T(int m, double x) {
    if (m <= 0) return 1.0;
    double prev = 1.0, cur = x;
    for (int k = 1; k < m; ++k) {
        const double next = 2.0 * x * cur - prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

double chebyshev_U(int d, double x) {
    if (d < 0) return 0.0;
    double prev = 1.0, cur = 2.0 * x;
    if (d == 0) return prev;
    for (int k = 1; k < d; ++k) {
        const double next = 2.0 * x * cur - prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

CircleValue circle_map(const BertrandParams& params, double rrdot, double r2, double J, double E) {
    const double x = orbits::chi(params, r2, J * J, E);
    const double th = orbits::theta(params, rrdot, r2, J, E);
    return {chebyshev_T(params.m, x), th * chebyshev_U(params.m - 1, x)};
}

CoverIndex branch_index(const dynamics::Trajectory& traj, std::size_t sample_index) {
    const int n = traj.params.n;
    return {sector_of(traj.samples.at(sample_index).phi_unwrapped, n), n};
}

std::vector<CoverIndex> branch_tracking(const dynamics::Trajectory& traj) {
    std::vector<CoverIndex> out;
    out.reserve(traj.samples.size());
    for (std::size_t i = 0; i < traj.samples.size(); ++i) out.push_back(branch_index(traj, i));
    return out;
}

CircleValue reconstruct_phase(const CircleValue& cv, const CoverIndex& k, int m, double phi0) {
    if (k.n < 1) throw InconsistentBranch("cover order must be at least 1");
    const int n = k.n;
    const int kk = positive_mod(k.k, n);
    const double raw = (std::atan2(cv.s, cv.c) + m * phi0) / n;
    double base = raw - kTwoPi * std::floor(raw / kTwoPi);  // representative in [0, 2pi)
    const int s0 = std::min(sector_of(base, n), n - 1);
    const double phi = base + kTwoPi * positive_mod(kk - s0, n) / n;
    return {std::cos(phi), std::sin(phi)};
}

RungeLenzSample runge_lenz(const BertrandParams& params, const dynamics::PhaseState& state,
                           const CoverIndex& k, double phi0) {
    if (k.n != params.n) {
        std::ostringstream os;
        os << "cover order " << k.n << " does not match the space's n = " << params.n;
        throw InconsistentBranch(os.str());
    }
    const double E = dynamics::hamiltonian(params, state);
    const auto frame = dynamics::rotate_to_plane(state);
    const double s = norm2(frame.state.q);
    const double rrdot = orbits::radial_rate(params, state);
    const auto cv = circle_map(params, rrdot, s, frame.J, E);
    const auto ph = reconstruct_phase(cv, k, params.m, phi0);
    return {assemble_vector(params, frame, ph.c, ph.s, phi0), {positive_mod(k.k, k.n), k.n}, 0.0};
}

std::vector<RungeLenzSample> runge_lenz_series(const BertrandParams& params,
                                               const dynamics::Trajectory& traj,
                                               std::optional<double> phi0) {
    const double p0 = phi0 ? *phi0 : orbits::fit_phi0(params, traj).phi0;
    const double sector = kTwoPi / params.n;
    std::vector<RungeLenzSample> out;
    out.reserve(traj.samples.size());
    for (std::size_t i = 0; i < traj.samples.size(); ++i) {
        const auto& smp = traj.samples[i];
        const double E = dynamics::hamiltonian(params, smp.state);
        const auto frame = dynamics::rotate_to_plane(smp.state);
        const double s = norm2(frame.state.q);
        const double rrdot = orbits::radial_rate(params, smp.state);
        const auto cv = circle_map(params, rrdot, s, frame.J, E);
        // Select the lifted-phase candidate nearest the recorded azimuth instead
        // of binning by sector: samples of a closed orbit land exactly on sector
        // boundaries whenever the sample grid is commensurate with the period,
        // and there binning resolves the candidate by roundoff noise alone.
        const double raw = (std::atan2(cv.s, cv.c) + params.m * p0) / params.n;
        const double phi = raw + sector * std::round((smp.phi_unwrapped - raw) / sector);
        out.push_back({assemble_vector(params, frame, std::cos(phi), std::sin(phi), p0),
                       branch_index(traj, i), smp.t});
    }
    return out;
}

SymmetricTensor symmetric_product(const std::vector<Vec3>& factors) {
    if (factors.empty()) throw InsufficientData("symmetric_product needs at least one factor");
    const int order = int(factors.size());
    // expand the product of linear forms prod_k (A_k . x); the coefficient of
    // x^alpha equals the symmetrized component times multinomial(alpha)
    std::vector<double> poly{1.0};
    for (int d = 0; d < order; ++d) {
        const Vec3& a = factors[d];
        std::vector<double> next(SymmetricTensor::component_count(d + 1), 0.0);
        for (int i = d; i >= 0; --i) {
            for (int j = d - i; j >= 0; --j) {
                const int k = d - i - j;
                const double c = poly[SymmetricTensor::index(d, i, j, k)];
                if (c == 0) continue;
                next[SymmetricTensor::index(d + 1, i + 1, j, k)] += c * a.x;
                next[SymmetricTensor::index(d + 1, i, j + 1, k)] += c * a.y;
                next[SymmetricTensor::index(d + 1, i, j, k + 1)] += c * a.z;
            }
        }
        poly.swap(next);
    }
    SymmetricTensor out;
    out.order = order;
    out.components.resize(poly.size());
    for (int i = order; i >= 0; --i) {
        for (int j = order - i; j >= 0; --j) {
            const int k = order - i - j;
            const int idx = SymmetricTensor::index(order, i, j, k);
            out.components[idx] = poly[idx] / multinomial(order, i, j, k);
        }
    }
    return out;
}

SymmetricTensor conserved_tensor(const BertrandParams& params, const dynamics::Trajectory& traj,
                                 std::size_t sample_index) {
    if (traj.samples.empty()) throw InsufficientData("conserved_tensor needs a sampled trajectory");
    const int n = params.n;
    if (n > 1) {
        const double sweep =
            std::fabs(traj.samples.back().phi_unwrapped - traj.samples.front().phi_unwrapped);
        if (sweep < kTwoPi * (1.0 - 1e-12)) {
            std::ostringstream os;
            os << "azimuth sweep " << sweep << " < 2 pi: not all " << n << " branches visited";
            throw InsufficientCoverage(os.str());
        }
    }
    const double phi0 = orbits::fit_phi0(params, traj).phi0;
    const auto& state = traj.samples.at(sample_index).state;
    std::vector<Vec3> factors;
    factors.reserve(n);
    for (int k = 0; k < n; ++k) factors.push_back(runge_lenz(params, state, {k, n}, phi0).A);
    return symmetric_product(factors);
}

}  // namespace bertrand::runge_lenz
