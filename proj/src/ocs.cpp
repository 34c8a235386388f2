#include "slicetw/ocs.hpp"

#include <cmath>

namespace slicetw {

Mat4 Mat4::identity() {
    Mat4 out;
    for (int k = 0; k < 4; ++k) out(k, k) = 1.0;
    return out;
}

Mat4 Mat4::operator*(const Mat4& o) const {
    Mat4 out;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) {
            double acc = 0;
            for (int k = 0; k < 4; ++k) acc += (*this)(r, k) * o(k, c);
            out(r, c) = acc;
        }
    return out;
}

Mat4 Mat4::operator+(const Mat4& o) const {
    Mat4 out;
    for (size_t k = 0; k < 16; ++k) out.m[k] = m[k] + o.m[k];
    return out;
}

Mat4 Mat4::operator-(const Mat4& o) const {
    Mat4 out;
    for (size_t k = 0; k < 16; ++k) out.m[k] = m[k] - o.m[k];
    return out;
}

Mat4 Mat4::operator*(double s) const {
    Mat4 out;
    for (size_t k = 0; k < 16; ++k) out.m[k] = m[k] * s;
    return out;
}

Mat4 Mat4::transpose() const {
    Mat4 out;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) out(r, c) = (*this)(c, r);
    return out;
}

Mat4 Mat4::inverse() const {
    // Gauss-Jordan with partial pivoting on [this | I]
    double a[4][8];
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) a[r][c] = (*this)(r, c);
        for (int c = 4; c < 8; ++c) a[r][c] = (c - 4 == r) ? 1.0 : 0.0;
    }
    for (int col = 0; col < 4; ++col) {
        int piv = col;
        for (int r = col + 1; r < 4; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (std::abs(a[piv][col]) < 1e-12 * std::max(1.0, norm_inf()))
            fail(Err::SingularDifferential, "matrix is numerically singular");
        if (piv != col)
            for (int c = 0; c < 8; ++c) std::swap(a[piv][c], a[col][c]);
        double d = a[col][col];
        for (int c = 0; c < 8; ++c) a[col][c] /= d;
        for (int r = 0; r < 4; ++r) {
            if (r == col) continue;
            double f = a[r][col];
            if (f == 0.0) continue;
            for (int c = 0; c < 8; ++c) a[r][c] -= f * a[col][c];
        }
    }
    Mat4 out;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) out(r, c) = a[r][c + 4];
    return out;
}

Quaternion Mat4::apply(const Quaternion& v) const {
    double in[4] = {v.q0, v.q1, v.q2, v.q3};
    double out[4] = {0, 0, 0, 0};
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) out[r] += (*this)(r, c) * in[c];
    return {out[0], out[1], out[2], out[3]};
}

double Mat4::norm_inf() const {
    double best = 0;
    for (double x : m) best = std::max(best, std::abs(x));
    return best;
}

double Mat4::det() const {
    double a[4][4];
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) a[r][c] = (*this)(r, c);
    double sign = 1.0, det = 1.0;
    for (int col = 0; col < 4; ++col) {
        int piv = col;
        for (int r = col + 1; r < 4; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (a[piv][col] == 0.0) return 0.0;
        if (piv != col) {
            sign = -sign;
            for (int c = 0; c < 4; ++c) std::swap(a[piv][c], a[col][c]);
        }
        det *= a[col][col];
        for (int r = col + 1; r < 4; ++r) {
            double f = a[r][col] / a[col][col];
            for (int c = col; c < 4; ++c) a[r][c] -= f * a[col][c];
        }
    }
    return sign * det;
}

int Mat4::rank(double tol) const {
    double a[4][4];
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) a[r][c] = (*this)(r, c);
    double scale = std::max(1e-300, norm_inf());
    int rank = 0;
    int row = 0;
    for (int col = 0; col < 4 && row < 4; ++col) {
        int piv = row;
        for (int r = row + 1; r < 4; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (std::abs(a[piv][col]) <= tol * scale) continue;
        if (piv != row)
            for (int c = 0; c < 4; ++c) std::swap(a[piv][c], a[row][c]);
        for (int r = row + 1; r < 4; ++r) {
            double f = a[r][col] / a[row][col];
            for (int c = col; c < 4; ++c) a[r][c] -= f * a[row][c];
        }
        ++rank;
        ++row;
    }
    return rank;
}

CSInvariants cs_invariants(const Mat4& m) {
    Mat4 sq = m * m + Mat4::identity();
    Mat4 orth = m.transpose() * m - Mat4::identity();
    return {sq.norm_inf(), orth.norm_inf(), std::abs(m.det() - 1.0)};
}

Mat4 left_mult_matrix(const ImaginaryUnit& I) {
    Mat4 out;
    out.m = {0,   -I.a, -I.b, -I.c,
             I.a, 0,    -I.c, I.b,
             I.b, I.c,  0,    -I.a,
             I.c, -I.b, I.a,  0};
    return out;
}

Mat4 j_from_twistor(cplx u) { return left_mult_matrix(unit_from_u(u)); }

Mat4 j_slice(const Quaternion& p) { return left_mult_matrix(decompose(p).I); }

Differential differential(const SliceFunction& f, const Quaternion& x) {
    SliceCoords sc = decompose(x);
    Quaternion I = sc.I.as_quaternion();
    Quaternion d = f.derivative().eval(x);
    Quaternion s = f.spherical_derivative(x);
    Differential out;
    out.base = x;
    const Quaternion basis[4] = {Quaternion::real(1.0), Quaternion::unit_i(),
                                 Quaternion::unit_j(), Quaternion::unit_k()};
    for (int c = 0; c < 4; ++c) {
        Quaternion e = basis[c];
        Quaternion par = Quaternion::real(1.0) * e.q0 + I * e.dot(I);
        Quaternion perp = e - par;
        Quaternion col = par * d + perp * s;
        out.m(0, c) = col.q0;
        out.m(1, c) = col.q1;
        out.m(2, c) = col.q2;
        out.m(3, c) = col.q3;
    }
    out.rank = out.m.rank();
    return out;
}

Pushforward pushforward(const SliceFunction& f, const Quaternion& x) {
    Differential df = differential(f, x);
    if (df.rank < 4)
        fail(Err::SingularDifferential, "differential has rank " + std::to_string(df.rank));
    Mat4 J = df.m * j_slice(x) * df.m.inverse();
    Mat4 expect = left_mult_matrix(decompose(x).I);
    return {J, (J - expect).norm_inf()};
}

Mat4 inversion_differential(const Quaternion& q) {
    double n2 = q.norm_sq();
    if (n2 == 0.0) fail(Err::Pole, "inversion is singular at 0");
    double n4 = n2 * n2;
    Mat4 out;
    const double comp[4] = {q.q0, q.q1, q.q2, q.q3};
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) {
            double sgn = (r == 0) ? 1.0 : -1.0;
            double val = -2.0 * sgn * comp[r] * comp[c];
            if (r == c) val += sgn * n2;
            out(r, c) = val / n4;
        }
    return out;
}

Mat4 pushforward_closed_form(const Quaternion& q) {
    if (!(q.q1 > 0)) fail(Err::WrongHalfSpace, "closed form needs q1 > 0");
    double n2 = q.norm_sq();
    double a = (q.q0 * q.q0 + q.q1 * q.q1 - q.q2 * q.q2 - q.q3 * q.q3) / n2;
    double b = 2.0 * (q.q0 * q.q3 + q.q1 * q.q2) / n2;
    double c = 2.0 * (q.q1 * q.q3 - q.q0 * q.q2) / n2;
    return left_mult_matrix(ImaginaryUnit{a, b, c});
}

double verify_intertwine(const Quaternion& q) {
    if (!(q.q1 > 0)) fail(Err::WrongHalfSpace, "intertwining needs q1 > 0");
    Mat4 dg = inversion_differential(q);
    Mat4 jf = pushforward_closed_form(q);
    Mat4 ji = left_mult_matrix(ImaginaryUnit::i());
    return (dg * jf - ji * dg).norm_inf();
}

SliceCoords preimage(const Quaternion& q) {
    if (!(q.q1 > 0)) fail(Err::WrongHalfSpace, "image of f0 is the half space q1 > 0");
    double denom = q.q0 * q.q0 + q.q1 * q.q1;
    double B = (q.q1 * q.q2 + q.q0 * q.q3) / denom;
    double C = (q.q1 * q.q3 - q.q0 * q.q2) / denom;
    double a = (1.0 - B * B - C * C) / (1.0 + B * B + C * C);
    double b = B * (a + 1.0);
    double c = C * (a + 1.0);
    double alpha = 2.0 * q.q0 / (a + 1.0);
    double beta = 2.0 * q.q1 / (a + 1.0);
    return {alpha, beta, ImaginaryUnit{a, b, c}};
}

} // namespace slicetw
