// support.hpp : small numeric helpers shared by the test binaries.
#pragma once

#include <algorithm>
#include <cmath>
#include <utility>

#include "bertrand/spaces.hpp"
#include "bertrand/vec3.hpp"

namespace bertrand::testing {

// (E, J2) whose radial quadratic has its turning points exactly at r1 and r2,
// via the Vieta relations in the substitution variable. Attractive amplitude
// keeps J2 positive.
inline std::pair<double, double> vieta_constants(const BertrandParams& params, double r1,
                                                 double r2) {
    const double x1 = spaces::eval_radial(params, r1 * r1).subst;
    const double x2 = spaces::eval_radial(params, r2 * r2).subst;
    double E, J2;
    if (params.family == Family::TypeI) {
        J2 = -2.0 * params.amplitude / (x1 + x2);
        E = params.G - 0.5 * J2 * (x1 * x2 + params.K);
    } else {
        J2 = -4.0 * params.branch() * params.amplitude / (x1 * x2 - params.K);
        E = params.G + 0.25 * J2 * (x1 + x2 + 2.0 * params.D());
    }
    return {E, J2};
}

struct EigenSystem {
    double values[3];  // ascending
    Vec3 vectors[3];   // unit, vectors[i] pairs with values[i]
};

// Cyclic Jacobi rotations for a symmetric 3x3 matrix.
inline EigenSystem jacobi_eigen(const Mat3& input) {
    Mat3 a = input;
    Mat3 v = Mat3::identity();
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0;
        for (int p = 0; p < 3; ++p)
            for (int q = p + 1; q < 3; ++q) off += a(p, q) * a(p, q);
        if (off < 1e-30) break;
        for (int p = 0; p < 3; ++p) {
            for (int q = p + 1; q < 3; ++q) {
                const double apq = a(p, q);
                if (std::fabs(apq) < 1e-300) continue;
                const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t =
                    (tau >= 0 ? 1.0 : -1.0) / (std::fabs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t), s = t * c;
                for (int r = 0; r < 3; ++r) {
                    const double arp = a(r, p), arq = a(r, q);
                    a(r, p) = c * arp - s * arq;
                    a(r, q) = s * arp + c * arq;
                }
                for (int r = 0; r < 3; ++r) {
                    const double apr = a(p, r), aqr = a(q, r);
                    a(p, r) = c * apr - s * aqr;
                    a(q, r) = s * apr + c * aqr;
                }
                for (int r = 0; r < 3; ++r) {
                    const double vrp = v(r, p), vrq = v(r, q);
                    v(r, p) = c * vrp - s * vrq;
                    v(r, q) = s * vrp + c * vrq;
                }
            }
        }
    }
    EigenSystem out;
    int order[3] = {0, 1, 2};
    std::sort(order, order + 3, [&](int i, int j) { return a(i, i) < a(j, j); });
    for (int i = 0; i < 3; ++i) {
        const int c = order[i];
        out.values[i] = a(c, c);
        out.vectors[i] = {v(0, c), v(1, c), v(2, c)};
    }
    return out;
}

// Angle between two directions, insensitive to sign.
inline double axis_angle(const Vec3& a, const Vec3& b) {
    const double c = std::fabs(dot(a, b)) / (norm(a) * norm(b));
    return std::acos(std::min(c, 1.0));
}

}  // namespace bertrand::testing
