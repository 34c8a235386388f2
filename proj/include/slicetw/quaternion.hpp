#pragma once

#include <cmath>
#include <complex>
#include <iosfwd>

#include "slicetw/error.hpp"

namespace slicetw {

using cplx = std::complex<double>;

/// Real quaternion q = q0 + q1 i + q2 j + q3 k.
struct Quaternion {
    double q0 = 0, q1 = 0, q2 = 0, q3 = 0;

    constexpr Quaternion() = default;
    constexpr Quaternion(double a, double b, double c, double d) : q0(a), q1(b), q2(c), q3(d) {}

    static constexpr Quaternion real(double a) { return {a, 0, 0, 0}; }
    static constexpr Quaternion unit_i() { return {0, 1, 0, 0}; }
    static constexpr Quaternion unit_j() { return {0, 0, 1, 0}; }
    static constexpr Quaternion unit_k() { return {0, 0, 0, 1}; }

    /// q = z1 + z2 j with z1, z2 in the complex plane spanned by 1 and i.
    static Quaternion from_pair(cplx z1, cplx z2) {
        return {z1.real(), z1.imag(), z2.real(), z2.imag()};
    }
    cplx c1() const { return {q0, q1}; }
    cplx c2() const { return {q2, q3}; }

    double norm_sq() const { return q0 * q0 + q1 * q1 + q2 * q2 + q3 * q3; }
    double norm() const { return std::sqrt(norm_sq()); }
    double im_norm() const { return std::sqrt(q1 * q1 + q2 * q2 + q3 * q3); }

    constexpr Quaternion conj() const { return {q0, -q1, -q2, -q3}; }
    constexpr Quaternion im() const { return {0, q1, q2, q3}; }

    Quaternion inverse() const {
        double n = norm_sq();
        if (n == 0.0) fail(Err::Pole, "inverse of zero quaternion");
        return {q0 / n, -q1 / n, -q2 / n, -q3 / n};
    }

    constexpr Quaternion operator-() const { return {-q0, -q1, -q2, -q3}; }
    constexpr Quaternion operator+(const Quaternion& o) const {
        return {q0 + o.q0, q1 + o.q1, q2 + o.q2, q3 + o.q3};
    }
    constexpr Quaternion operator-(const Quaternion& o) const {
        return {q0 - o.q0, q1 - o.q1, q2 - o.q2, q3 - o.q3};
    }
    constexpr Quaternion operator*(const Quaternion& o) const {
        return {q0 * o.q0 - q1 * o.q1 - q2 * o.q2 - q3 * o.q3,
                q0 * o.q1 + q1 * o.q0 + q2 * o.q3 - q3 * o.q2,
                q0 * o.q2 - q1 * o.q3 + q2 * o.q0 + q3 * o.q1,
                q0 * o.q3 + q1 * o.q2 - q2 * o.q1 + q3 * o.q0};
    }
    constexpr Quaternion operator*(double s) const { return {q0 * s, q1 * s, q2 * s, q3 * s}; }
    friend constexpr Quaternion operator*(double s, const Quaternion& q) { return q * s; }
    Quaternion operator/(double s) const { return {q0 / s, q1 / s, q2 / s, q3 / s}; }

    double dot(const Quaternion& o) const {
        return q0 * o.q0 + q1 * o.q1 + q2 * o.q2 + q3 * o.q3;
    }

    bool is_real(double tol = 0.0) const { return im_norm() <= tol; }
};

inline double dist(const Quaternion& a, const Quaternion& b) { return (a - b).norm(); }

/// complex scalars act as elements of the slice C_i, multiplying on the left
inline Quaternion operator*(cplx a, const Quaternion& q) {
    return Quaternion{a.real(), a.imag(), 0, 0} * q;
}

std::ostream& operator<<(std::ostream& os, const Quaternion& q);

/// Point of the imaginary-unit sphere: I = a i + b j + c k with a^2+b^2+c^2 = 1.
struct ImaginaryUnit {
    double a = 1, b = 0, c = 0;

    static constexpr ImaginaryUnit i() { return {1, 0, 0}; }
    static constexpr ImaginaryUnit j() { return {0, 1, 0}; }
    static constexpr ImaginaryUnit k() { return {0, 0, 1}; }

    /// Normalizes a nonzero direction vector onto the sphere.
    static ImaginaryUnit from_vector(double a, double b, double c) {
        double n = std::sqrt(a * a + b * b + c * c);
        if (n == 0.0) fail(Err::InvalidArgument, "zero vector is not an imaginary unit");
        return {a / n, b / n, c / n};
    }

    constexpr Quaternion as_quaternion() const { return {0, a, b, c}; }
    constexpr ImaginaryUnit operator-() const { return {-a, -b, -c}; }
};

/// x = alpha + I beta with beta > 0; the canonical coordinates on H \ R.
struct SliceCoords {
    double alpha = 0;
    double beta = 1;
    ImaginaryUnit I;

    Quaternion recompose() const {
        return {alpha, beta * I.a, beta * I.b, beta * I.c};
    }
    Quaternion conj_point() const {
        return {alpha, -beta * I.a, -beta * I.b, -beta * I.c};
    }
};

/// Splits q into (alpha, beta, I) with beta = |Im q| > 0.
inline SliceCoords decompose(const Quaternion& q, double real_tol = 0.0) {
    double beta = q.im_norm();
    if (beta <= real_tol)
        fail(Err::RealInput, "quaternion has no imaginary part to normalize");
    return {q.q0, beta, {q.q1 / beta, q.q2 / beta, q.q3 / beta}};
}

/// Stereographic chart on S \ {-i}: u = -i (b + i c) / (1 + a), so that
/// Q_u^{-1} i Q_u = I with Q_u = 1 + u j.
inline cplx u_from_unit(const ImaginaryUnit& I) {
    if (I.a == -1.0) fail(Err::SouthPole, "chart is undefined at I = -i");
    return cplx(0, -1) * cplx(I.b, I.c) / (1.0 + I.a);
}

inline ImaginaryUnit unit_from_u(cplx u) {
    double n2 = std::norm(u);
    double a = (1.0 - n2) / (1.0 + n2);
    cplx bc = cplx(0, 1) * u * (1.0 + a);
    return {a, bc.real(), bc.imag()};
}

inline Quaternion chart_factor(cplx u) { return Quaternion::from_pair(1.0, u); }

/// Complexified quaternion p = x + sqrt(-1) y, with x, y in H.
/// sqrt(-1) is a central element, distinct from the quaternion i.
struct CQuaternion {
    Quaternion x, y;

    constexpr CQuaternion() = default;
    constexpr CQuaternion(Quaternion re, Quaternion im) : x(re), y(im) {}

    constexpr CQuaternion operator+(const CQuaternion& o) const { return {x + o.x, y + o.y}; }
    constexpr CQuaternion operator-(const CQuaternion& o) const { return {x - o.x, y - o.y}; }
    /// pq = xz - yt + sqrt(-1)(xt + yz)
    constexpr CQuaternion operator*(const CQuaternion& o) const {
        return {x * o.x - y * o.y, x * o.y + y * o.x};
    }
    constexpr CQuaternion operator*(double s) const { return {x * s, y * s}; }

    /// p^c: componentwise quaternionic conjugation.
    constexpr CQuaternion conj_c() const { return {x.conj(), y.conj()}; }
    /// p bar: conjugation of the complex structure, x - sqrt(-1) y.
    constexpr CQuaternion conj_bar() const { return {x, -y}; }

    double norm() const { return std::sqrt(x.norm_sq() + y.norm_sq()); }
};

inline double dist(const CQuaternion& a, const CQuaternion& b) { return (a - b).norm(); }

} // namespace slicetw
