#include "slicetw/twistor.hpp"

#include <cmath>

namespace slicetw {

double ProjPoint3::norm() const {
    double s = 0;
    for (const auto& x : X) s += std::norm(x);
    return std::sqrt(s);
}

double chordal(const ProjPoint3& p, const ProjPoint3& q) {
    // sin of the Fubini-Study angle, computed through the wedge so that
    // nearly proportional points do not lose half the precision
    double np = 0, nq = 0, wedge = 0;
    for (int k = 0; k < 4; ++k) {
        np += std::norm(p[k]);
        nq += std::norm(q[k]);
        for (int l = k + 1; l < 4; ++l) wedge += std::norm(p[k] * q[l] - p[l] * q[k]);
    }
    if (np == 0 || nq == 0) fail(Err::InvalidArgument, "projective point must be nonzero");
    return std::min(1.0, std::sqrt(wedge / (np * nq)));
}

ProjValue project(const ProjPoint3& p) {
    Quaternion den = Quaternion::from_pair(p[0], p[1]);
    Quaternion num = Quaternion::from_pair(p[2], p[3]);
    if (den.norm_sq() == 0.0) return {true, {}};
    return {false, den.inverse() * num};
}

ProjPoint3 j_map(const ProjPoint3& p) {
    return {{-std::conj(p[1]), std::conj(p[0]), -std::conj(p[3]), std::conj(p[2])}};
}

ProjPoint3 FiberLine::at(cplx X0, cplx X1) const {
    cplx q1 = base.c1(), q2 = base.c2();
    return {{X0, X1, X0 * q1 - X1 * std::conj(q2), X0 * q2 + X1 * std::conj(q1)}};
}

double FiberLine::residual(const ProjPoint3& p) const {
    cplx q1 = base.c1(), q2 = base.c2();
    double scale = p.norm() * std::max(1.0, base.norm());
    double r1 = std::abs(p[2] - (p[0] * q1 - p[1] * std::conj(q2)));
    double r2 = std::abs(p[3] - (p[0] * q2 + p[1] * std::conj(q1)));
    return std::max(r1, r2) / scale;
}

ProjPoint3 lift(const SliceFunction& f, cplx u, cplx v) {
    if (!(v.imag() > 0)) fail(Err::OutOfDomain, "lift requires Im v > 0");
    return {{1.0, u, f.g()(v) - u * f.hhat()(v), f.h()(v) + u * f.ghat()(v)}};
}

ProjPoint3 lift_infinity(const SliceFunction& f, cplx v) {
    if (!(v.imag() > 0)) fail(Err::OutOfDomain, "lift requires Im v > 0");
    return {{0.0, 1.0, -f.hhat()(v), f.ghat()(v)}};
}

Mat4c conformal_lift(Quaternion a, Quaternion b, Quaternion c, Quaternion d) {
    double inv = a.norm_sq() * d.norm_sq() + b.norm_sq() * c.norm_sq() -
                 2.0 * (b.conj() * d * c.conj() * a).q0;
    if (std::abs(inv) < 1e-14)
        fail(Err::NotInvertible, "conformal transformation is not invertible");
    cplx a1 = a.c1(), a2 = a.c2(), b1 = b.c1(), b2 = b.c2();
    cplx c1 = c.c1(), c2 = c.c2(), d1 = d.c1(), d2 = d.c2();
    // right multiplication by a quaternion w = w1 + w2 j acts on a complex
    // pair (X, Y) representing X + Y j as (X w1 - Y conj w2, X w2 + Y conj w1)
    return {{{{d1, -std::conj(d2), c1, -std::conj(c2)}},
             {{d2, std::conj(d1), c2, std::conj(c1)}},
             {{b1, -std::conj(b2), a1, -std::conj(a2)}},
             {{b2, std::conj(b1), a2, std::conj(a1)}}}};
}

ProjPoint3 apply_matrix(const Mat4c& m, const ProjPoint3& p) {
    ProjPoint3 out;
    for (int r = 0; r < 4; ++r) {
        cplx acc = 0;
        for (int k = 0; k < 4; ++k) acc += m[size_t(r)][size_t(k)] * p[k];
        out[r] = acc;
    }
    return out;
}

Quaternion fractional_transform(Quaternion q, Quaternion a, Quaternion b, Quaternion c,
                                Quaternion d) {
    return (q * c + d).inverse() * (q * a + b);
}

} // namespace slicetw
