#pragma once

#include <array>
#include <vector>

#include "slicetw/slice_function.hpp"
#include "slicetw/twistor.hpp"

namespace slicetw {

/// Homogeneous coordinates [xi1..xi6] in P(Lambda^2 C^4), basis
/// {e01, e02, e03, e12, e13, e23}.
struct ProjPoint5 {
    std::array<cplx, 6> xi{};

    cplx& operator[](int k) { return xi[size_t(k)]; }
    const cplx& operator[](int k) const { return xi[size_t(k)]; }

    double norm() const;
    /// xi1 xi6 - xi2 xi5 + xi3 xi4, relative to max |xi|^2
    double klein_residual() const;
};

double chordal(const ProjPoint5& p, const ProjPoint5& q);

/// real structure sigma [xi1..xi6] |-> [conj xi1, conj xi5, -conj xi4,
/// -conj xi3, conj xi2, conj xi6]; fixed points are j-invariant lines
ProjPoint5 sigma(const ProjPoint5& p);

/// Pluecker coordinates of the line through two CP^3 points, as covectors
/// (the plane-pair dual), matching the twistor-transform normalization.
ProjPoint5 line_through(const ProjPoint3& p, const ProjPoint3& q);

/// Twistor transform: v |-> Pluecker point of the lifted line over l_v,
/// in closed form [g ghat + hhat h, h, -g, ghat, hhat, 1].
struct TransformCurve {
    std::array<SliceSlot, 6> coord;
    bool expression_built = false;
    Region domain;

    ProjPoint5 eval(cplx v) const;
    /// printable coordinates; requires expression-built
    std::array<std::string, 6> exprs() const;
};

TransformCurve transform(const SliceFunction& f);

/// Reads the splitting back from a curve with xi6 never zero on the domain:
/// g = -xi3/xi6, h = xi2/xi6, ghat = xi4/xi6, hhat = xi5/xi6.
SliceFunction inverse_transform(const TransformCurve& curve, unsigned long long seed = 1,
                                int samples = 64);

struct TwistorLineHit {
    cplx v;
    double residual;
};

struct FinderOptions {
    int grid = 200;
    double tol = 1e-8;
    double coarse_cutoff = 0.5;   // grid minima above this are not refined
    double dedup_radius = 1e-5;
};

/// Scans r(v) = chordal(sigma(curve(v)), curve(v)) over box = {re0, re1,
/// im0, im1}, refines local minima by derivative-free pattern search and
/// returns the v with r below tol.
std::vector<TwistorLineHit> find_twistor_lines(const TransformCurve& curve,
                                               const std::array<double, 4>& box,
                                               const FinderOptions& opts = {});

struct AffineCheckReport {
    bool affine = false;
    cplx hermitian_residual = 0;
    double fit_residual = 0;       // degree-1 fit of the cleared transform
    // slice-derivative and remainder values on C_{+i} / C_{-i}
    Quaternion f_plus, f_minus, g_plus, g_minus;
};

/// hermitian product on C_i + C_i j: h_i(p, q) = p1 conj(q1) + p2 conj(q2)
cplx hermitian_i(const Quaternion& p, const Quaternion& q);

/// Forms (A + x B) . f, verifies it is slice affine, extracts the slice
/// derivative values f_{+-i} and the remainder values g_{+-i}, and evaluates
/// the invariant h_i(A f_i - B g_i, conj(A) f_{-i} - conj(B) g_{-i}).
AffineCheckReport check_affine_transform(const SliceFunction& f, cplx A, cplx B,
                                         unsigned long long seed = 1, int samples = 32,
                                         double tol = 1e-8);

} // namespace slicetw
