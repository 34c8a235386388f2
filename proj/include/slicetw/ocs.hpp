#pragma once

#include <array>

#include "slicetw/quaternion.hpp"
#include "slicetw/slice_function.hpp"

namespace slicetw {

/// 4x4 real matrix acting on T_p H identified with H in the basis (1, i, j, k).
struct Mat4 {
    std::array<double, 16> m{};

    double& operator()(int r, int c) { return m[size_t(r) * 4 + size_t(c)]; }
    double operator()(int r, int c) const { return m[size_t(r) * 4 + size_t(c)]; }

    static Mat4 identity();
    Mat4 operator*(const Mat4& o) const;
    Mat4 operator+(const Mat4& o) const;
    Mat4 operator-(const Mat4& o) const;
    Mat4 operator*(double s) const;
    Mat4 transpose() const;
    /// Gauss-Jordan inverse; throws SingularDifferential when rank deficient.
    Mat4 inverse() const;
    Quaternion apply(const Quaternion& v) const;
    double norm_inf() const;
    double det() const;
    /// numerical rank with pivot threshold relative to the largest entry
    int rank(double tol = 1e-8) const;
};

/// residuals of the complex-structure invariants M^2 = -Id, M^T M = Id, det = 1
struct CSInvariants {
    double square_residual;
    double orthogonality_residual;
    double det_residual;
};

CSInvariants cs_invariants(const Mat4& m);

/// matrix of left multiplication by the unit I
Mat4 left_mult_matrix(const ImaginaryUnit& I);

/// ACS matrix of the twistor point [1, u, X2, X3]: left multiplication by the
/// chart unit of u. Equals j_slice on the fibre over any q with I_q mapped by u.
Mat4 j_from_twistor(cplx u);

/// slice complex structure J_p v = I_p v; RealInput off H \ R
Mat4 j_slice(const Quaternion& p);

struct Differential {
    Quaternion base;
    Mat4 m;
    int rank = 0;
};

/// real differential assembled from the slice and spherical derivatives via
/// the C_I + C_I-perp split of the tangent space
Differential differential(const SliceFunction& f, const Quaternion& x);

struct Pushforward {
    Mat4 m;
    double residual_vs_slice;   // distance to left multiplication by I_x
};

/// (df) J (df)^{-1} at x; SingularDifferential when df is not invertible
Pushforward pushforward(const SliceFunction& f, const Quaternion& x);

/// closed-form differential of g(q) = q^{-1}
Mat4 inversion_differential(const Quaternion& q);

/// J^f at an image point q with q1 > 0, from the closed-form chart
/// a = (q0^2+q1^2-q2^2-q3^2)/|q|^2, b = 2(q0 q3 + q1 q2)/|q|^2,
/// c = 2(q1 q3 - q0 q2)/|q|^2.
Mat4 pushforward_closed_form(const Quaternion& q);

/// || dg . J^f - J_i . dg ||_inf at q; WrongHalfSpace unless q1 > 0
double verify_intertwine(const Quaternion& q);

/// solves f0(x) = q for f0 = x (1 - Ii)/2; WrongHalfSpace unless q1 > 0
SliceCoords preimage(const Quaternion& q);

} // namespace slicetw
