// vec3.hpp : minimal 3-vector / 3x3-matrix algebra used throughout the library.
#pragma once

#include <array>
#include <cmath>

namespace bertrand {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
    double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator-() const { return {-x, -y, -z}; }
    Vec3 operator*(double a) const { return {a * x, a * y, a * z}; }
    Vec3 operator/(double a) const { return {x / a, y / a, z / a}; }
    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
};

inline Vec3 operator*(double a, const Vec3& v) { return v * a; }
inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm2(const Vec3& v) { return dot(v, v); }
inline double norm(const Vec3& v) { return std::sqrt(norm2(v)); }
inline double max_abs(const Vec3& v) {
    return std::max(std::fabs(v.x), std::max(std::fabs(v.y), std::fabs(v.z)));
}

// Row-major 3x3 matrix; enough for the plane rotations and metric pullbacks.
struct Mat3 {
    std::array<double, 9> a{1, 0, 0, 0, 1, 0, 0, 0, 1};

    double& operator()(int i, int j) { return a[3 * i + j]; }
    double operator()(int i, int j) const { return a[3 * i + j]; }

    static Mat3 identity() { return {}; }

    Mat3 transpose() const {
        Mat3 t;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) t(i, j) = (*this)(j, i);
        return t;
    }
};

inline Vec3 operator*(const Mat3& m, const Vec3& v) {
    return {m(0, 0) * v.x + m(0, 1) * v.y + m(0, 2) * v.z,
            m(1, 0) * v.x + m(1, 1) * v.y + m(1, 2) * v.z,
            m(2, 0) * v.x + m(2, 1) * v.y + m(2, 2) * v.z};
}

inline Mat3 operator*(const Mat3& p, const Mat3& q) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0;
            for (int k = 0; k < 3; ++k) s += p(i, k) * q(k, j);
            r(i, j) = s;
        }
    return r;
}

// Rotation by `angle` about unit axis `u` (Rodrigues form).
inline Mat3 rotation_about(const Vec3& u, double angle) {
    const double c = std::cos(angle), s = std::sin(angle), t = 1.0 - c;
    Mat3 r;
    r(0, 0) = c + u.x * u.x * t;
    r(0, 1) = u.x * u.y * t - u.z * s;
    r(0, 2) = u.x * u.z * t + u.y * s;
    r(1, 0) = u.y * u.x * t + u.z * s;
    r(1, 1) = c + u.y * u.y * t;
    r(1, 2) = u.y * u.z * t - u.x * s;
    r(2, 0) = u.z * u.x * t - u.y * s;
    r(2, 1) = u.z * u.y * t + u.x * s;
    r(2, 2) = c + u.z * u.z * t;
    return r;
}

// Rotation carrying unit vector `from` onto unit vector `to`; identity when already aligned.
inline Mat3 rotation_between(const Vec3& from, const Vec3& to) {
    Vec3 axis = cross(from, to);
    const double s = norm(axis), c = dot(from, to);
    if (s < 1e-300) {
        if (c > 0) return Mat3::identity();
        // antiparallel: rotate by pi about any axis orthogonal to `from`
        Vec3 ortho = std::fabs(from.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
        ortho -= from * dot(ortho, from);
        return rotation_about(ortho / norm(ortho), M_PI);
    }
    return rotation_about(axis / s, std::atan2(s, c));
}

}  // namespace bertrand
