#pragma once

#include <array>

#include "slicetw/quaternion.hpp"
#include "slicetw/slice_function.hpp"

namespace slicetw {

/// Homogeneous coordinates [X0, X1, X2, X3] in CP^3.
struct ProjPoint3 {
    std::array<cplx, 4> X{};

    cplx& operator[](int k) { return X[size_t(k)]; }
    const cplx& operator[](int k) const { return X[size_t(k)]; }

    double norm() const;
};

/// chordal distance d(p, q) = sqrt(1 - |<p,q>|^2 / (|p|^2 |q|^2))
double chordal(const ProjPoint3& p, const ProjPoint3& q);

/// Twistor projection pi[X] = [X0 + X1 j, X2 + X3 j] in HP^1, returned in the
/// affine chart. infinity is a first-class value (X0 + X1 j = 0).
struct ProjValue {
    bool infinity = false;
    Quaternion q;
};

ProjValue project(const ProjPoint3& p);

/// j-involution [X0,X1,X2,X3] |-> [-conj X1, conj X0, -conj X3, conj X2]
ProjPoint3 j_map(const ProjPoint3& p);

/// Fibre of pi over a finite quaternion q = q1 + q2 j, parametrized by
/// [X0 : X1] |-> [X0, X1, X0 q1 - X1 conj(q2), X0 q2 + X1 conj(q1)].
struct FiberLine {
    Quaternion base;

    ProjPoint3 at(cplx X0, cplx X1) const;
    /// residual of the two linear fibre equations at p, scale-normalized
    double residual(const ProjPoint3& p) const;
};

/// Twistor lift in the first affine chart: [1, u, g(v) - u hhat(v), h(v) + u ghat(v)].
/// Requires Im v > 0.
ProjPoint3 lift(const SliceFunction& f, cplx u, cplx v);

/// Second chart, the projective limit u -> infinity: [0, 1, -hhat(v), ghat(v)].
ProjPoint3 lift_infinity(const SliceFunction& f, cplx v);

using Mat4c = std::array<std::array<cplx, 4>, 4>;

/// Lift of the conformal transformation [q1, q2] |-> [q1 d + q2 c, q1 b + q2 a]
/// of HP^1 to a j-preserving projective transformation of CP^3.
/// Throws NotInvertible when |a|^2|d|^2 + |b|^2|c|^2 - 2 Re(b^c d c^c a) = 0.
Mat4c conformal_lift(Quaternion a, Quaternion b, Quaternion c, Quaternion d);

ProjPoint3 apply_matrix(const Mat4c& m, const ProjPoint3& p);

/// The linear fractional map q |-> (q c + d)^{-1} (q a + b) on H.
Quaternion fractional_transform(Quaternion q, Quaternion a, Quaternion b, Quaternion c,
                                Quaternion d);

} // namespace slicetw
