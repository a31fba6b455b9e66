// runge_lenz.hpp : Chebyshev lifting of the orbit phase onto the unit circle,
// branch tracking on the n-fold azimuth cover, the generalized Runge-Lenz
// vector and the conserved rank-n symmetric tensor built from its branches.
#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "bertrand/dynamics.hpp"
#include "bertrand/orbits.hpp"

namespace bertrand::runge_lenz {

// Point on the unit circle; circle_map emits (cos(n phi - m phi0), sin(n phi - m phi0)).
struct CircleValue {
    double c = 1;
    double s = 0;
};

// Azimuth sector [2 pi k / n, 2 pi (k+1) / n) of the n-fold cover.
struct CoverIndex {
    int k = 0;
    int n = 1;
};

struct RungeLenzSample {
    Vec3 A;         // unit vector, constant along the flow
    CoverIndex k;
    double t = 0;
};

// Fully symmetric rank-`order` tensor over 3 axes; only the (order+1)(order+2)/2
// independent components are stored, indexed by multidegree (i, j, k), i+j+k = order.
struct SymmetricTensor {
    int order = 1;
    std::vector<double> components;

    static int component_count(int order) { return (order + 1) * (order + 2) / 2; }
    static int index(int order, int i, int j, int k);
    double at(int i, int j, int k) const;
};

// Three-term recurrences; T_m(cos a) = cos(m a), U_{m-1}(cos a) sin a = sin(m a).
double chebyshev_T(int m, double x);
double chebyshev_U(int d, double x);

// (T_m(chi), Theta * U_{m-1}(chi)): the analytic circle-valued map whose value
// along an orbit is e^{i(n phi - m phi0)}.
CircleValue circle_map(const BertrandParams& params, double rrdot, double r2, double J, double E);

// k = floor(n * phi_unwrapped / (2 pi)) mod n.
CoverIndex branch_index(const dynamics::Trajectory& traj, std::size_t sample_index);
std::vector<CoverIndex> branch_tracking(const dynamics::Trajectory& traj);

// e^{i Phi} where Phi = (atan2(s, c) + m*phi0 + 2 pi j)/n with j the unique
// representative placing Phi in sector k; composing with circle_map recovers
// e^{i phi} along trajectories. k is reduced mod n (for n = 1 the cover is
// trivial and every k yields the same value).
CircleValue reconstruct_phase(const CircleValue& cv, const CoverIndex& k, int m = 1,
                              double phi0 = 0.0);

// The unit vector cos(psi) rhat - sin(psi) phihat in the invariant plane,
// psi = Phi - m*phi0/n, rotated back to the world frame. The 1/J of the
// transverse term is cancelled inside Theta, so J = 0 states evaluate finitely.
RungeLenzSample runge_lenz(const BertrandParams& params, const dynamics::PhaseState& state,
                           const CoverIndex& k, double phi0 = 0.0);

// A at every trajectory sample; phi0 is fitted from the trajectory when absent.
std::vector<RungeLenzSample> runge_lenz_series(const BertrandParams& params,
                                               const dynamics::Trajectory& traj,
                                               std::optional<double> phi0 = std::nullopt);

// Symmetrized outer product of the factors (component = averaged sum over
// factor orderings).
SymmetricTensor symmetric_product(const std::vector<Vec3>& factors);

// Symmetrized product of the n branch vectors reconstructed from one sample's
// CircleValue with every k; single-valued on the base space and constant along
// the flow. Requires azimuth coverage of a full turn when n > 1.
SymmetricTensor conserved_tensor(const BertrandParams& params, const dynamics::Trajectory& traj,
                                 std::size_t sample_index = 0);

}  // namespace bertrand::runge_lenz
