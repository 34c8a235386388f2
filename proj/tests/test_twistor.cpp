#include <doctest.h>

#include "slicetw/twistor.hpp"

using namespace slicetw;

namespace {

SliceFunction f_zero_on_minus() {
    return {HoloMap::var(), HoloMap::constant(0.0), HoloMap::constant(0.0),
            HoloMap::constant(0.0)};
}

} // namespace

TEST_CASE("twistor projection") {
    ProjPoint3 p{{1.0, 0.0, cplx(2, 3), 0.0}};
    ProjValue val = project(p);
    CHECK_FALSE(val.infinity);
    CHECK(dist(val.q, {2, 3, 0, 0}) < 1e-15);

    // [1, u, v, uv] projects to Q_u^{-1} v Q_u
    Rng rng(1);
    for (int s = 0; s < 200; ++s) {
        cplx u = sample_cplx(rng), v = sample_cplx(rng, 0.1, 1.8);
        ProjPoint3 q{{1.0, u, v, u * v}};
        Quaternion Qu = chart_factor(u);
        Quaternion expect = Qu.inverse() * Quaternion::from_pair(v, 0.0) * Qu;
        CHECK(dist(project(q).q, expect) < 1e-13 * (1 + expect.norm()));
    }

    // X0 + X1 j = j is invertible; compare against quaternion division
    cplx q1(0.4, -0.2);
    ProjPoint3 r{{0.0, 1.0, 0.0, std::conj(q1)}};
    Quaternion den = Quaternion::from_pair(0.0, 1.0);
    Quaternion num = Quaternion::from_pair(0.0, std::conj(q1));
    CHECK(dist(project(r).q, den.inverse() * num) < 1e-15);

    ProjPoint3 inf{{0.0, 0.0, 1.0, 0.0}};
    CHECK(project(inf).infinity);
}

TEST_CASE("j involution and fibres") {
    ProjPoint3 e0{{1.0, 0.0, 0.0, 0.0}};
    ProjPoint3 je0 = j_map(e0);
    CHECK(chordal(je0, ProjPoint3{{0.0, 1.0, 0.0, 0.0}}) < 1e-15);

    Rng rng(2);
    for (int s = 0; s < 500; ++s) {
        ProjPoint3 p{{sample_cplx(rng), sample_cplx(rng), sample_cplx(rng), sample_cplx(rng)}};
        if (p.norm() < 0.1) continue;
        CHECK(chordal(j_map(j_map(p)), p) < 1e-12);
        CHECK(chordal(j_map(p), p) > 1e-3); // no fixed points
        // p and j(p) span the fibre over pi(p)
        ProjValue base = project(p);
        if (base.infinity || base.q.norm() > 20) continue;
        FiberLine fiber{base.q};
        CHECK(fiber.residual(p) < 1e-12);
        CHECK(fiber.residual(j_map(p)) < 1e-12);
        // fibre lines are j-invariant as sets
        cplx s0 = sample_cplx(rng), s1 = sample_cplx(rng);
        CHECK(fiber.residual(j_map(fiber.at(s0, s1))) < 1e-10);
    }
}

TEST_CASE("twistor lift") {
    SliceFunction f0 = f_zero_on_minus();
    Rng rng(3);
    for (int s = 0; s < 200; ++s) {
        cplx u = sample_cplx(rng), v = sample_cplx(rng, 0.05, 1.9);
        if (v.imag() <= 0) v = {v.real(), 0.3};
        CHECK(chordal(lift(f0, u, v), ProjPoint3{{1.0, u, v, 0.0}}) < 1e-13);
        CHECK(chordal(lift(SliceFunction::identity(), u, v), ProjPoint3{{1.0, u, v, u * v}}) <
              1e-13);
    }
    CHECK_THROWS_AS((void)lift(f0, 0.0, cplx(1, -1)), Error);

    // commuting square pi . lift = f . pi, both charts
    HoloMap v = HoloMap::var();
    SliceFunction fns[3] = {f0, SliceFunction::identity(),
                            {v, v, HoloMap::constant(-1.0), HoloMap::constant(-1.0)}};
    for (const SliceFunction& f : fns) {
        for (int s = 0; s < 300; ++s) {
            cplx u = sample_cplx(rng), w = sample_cplx(rng, 0.1, 1.8);
            ProjPoint3 base{{1.0, u, w, u * w}};
            Quaternion x = project(base).q;
            CHECK(dist(project(lift(f, u, w)).q, f.eval(x)) < 1e-11 * (1 + f.eval(x).norm()));
            // second chart: [0, 1, 0, w] lies over the opposite semislice
            ProjPoint3 south{{0.0, 1.0, 0.0, w}};
            Quaternion xs = project(south).q;
            CHECK(dist(project(lift_infinity(f, w)).q, f.eval(xs)) <
                  1e-11 * (1 + f.eval(xs).norm()));
        }
    }

    // real slice functions lift into the quadric X0 X3 = X1 X2
    SliceFunction real_poly{pow(v, 2) + HoloMap::constant(1.0),
                            pow(v, 2) + HoloMap::constant(1.0), HoloMap::constant(0.0),
                            HoloMap::constant(0.0)};
    for (int s = 0; s < 500; ++s) {
        cplx u = sample_cplx(rng), w = sample_cplx(rng, 0.1, 1.8);
        ProjPoint3 p = lift(real_poly, u, w);
        CHECK(std::abs(p[0] * p[3] - p[1] * p[2]) < 1e-10);
    }
}

TEST_CASE("plane-pair lift bookkeeping") {
    // x(1 - Ii) j / 2 has quadruple (0, 0, v, 0): its lift is [1, u, 0, v],
    // inside the plane X2 = 0 and not on the plane pair X0^2 = X2^2; the
    // quadruple (1, 0, v, 0) is what lands on the plane pair.
    HoloMap v = HoloMap::var(), zero = HoloMap::constant(0.0);
    SliceFunction with_j{zero, zero, v, zero};
    SliceFunction shifted{HoloMap::constant(1.0), zero, v, zero};
    Rng rng(4);
    for (int s = 0; s < 200; ++s) {
        cplx u = sample_cplx(rng), w = sample_cplx(rng, 0.1, 1.8);
        ProjPoint3 p = lift(with_j, u, w);
        CHECK(chordal(p, ProjPoint3{{1.0, u, 0.0, w}}) < 1e-13);
        CHECK(std::abs(p[2]) < 1e-15);                       // on X2 = 0
        CHECK(std::abs(p[0] * p[0] - p[2] * p[2]) > 0.5);    // off the plane pair
        ProjPoint3 q = lift(shifted, u, w);
        CHECK(std::abs(q[0] * q[0] - q[2] * q[2]) < 1e-15);  // on the plane pair
        // both stay honest about the commuting square
        Quaternion x = project(ProjPoint3{{1.0, u, w, u * w}}).q;
        CHECK(dist(project(p).q, with_j.eval(x)) < 1e-12 * (1 + x.norm()));
        CHECK(dist(project(q).q, shifted.eval(x)) < 1e-12 * (1 + x.norm()));
    }
}

TEST_CASE("conformal lifts") {
    Quaternion zero{}, one = Quaternion::real(1);
    // inversion swaps the two complex pairs
    Mat4c inv = conformal_lift(zero, one, one, zero);
    ProjPoint3 p{{cplx(1, 1), cplx(0, 2), cplx(-1, 0), cplx(3, 1)}};
    ProjPoint3 swapped = apply_matrix(inv, p);
    CHECK(chordal(swapped, ProjPoint3{{p[2], p[3], p[0], p[1]}}) < 1e-15);

    Mat4c ident = conformal_lift(one, zero, zero, one);
    CHECK(chordal(apply_matrix(ident, p), p) < 1e-15);

    CHECK_THROWS_AS((void)conformal_lift(one, one, one, one), Error);

    Rng rng(5);
    Quaternion a = Quaternion::unit_i(), d = one;
    Mat4c m = conformal_lift(a, zero, zero, d);
    for (int s = 0; s < 100; ++s) {
        ProjPoint3 x{{sample_cplx(rng), sample_cplx(rng), sample_cplx(rng), sample_cplx(rng)}};
        if (x.norm() < 0.1) continue;
        // j-preserving
        CHECK(chordal(apply_matrix(m, j_map(x)), j_map(apply_matrix(m, x))) < 1e-10);
        // acting then projecting equals the fractional transform
        ProjValue base = project(x);
        ProjValue moved = project(apply_matrix(m, x));
        if (base.infinity || moved.infinity) continue;
        Quaternion expect = fractional_transform(base.q, a, zero, zero, d);
        CHECK(dist(moved.q, expect) < 1e-10 * (1 + expect.norm()));
    }

    // random conformal transformations keep commuting with j
    for (int s = 0; s < 100; ++s) {
        Quaternion a2 = sample_quaternion(rng, 1.5, 0.0), b2 = sample_quaternion(rng, 1.5, 0.0);
        Quaternion c2 = sample_quaternion(rng, 1.5, 0.0), d2 = sample_quaternion(rng, 1.5, 0.0);
        Mat4c mm;
        try {
            mm = conformal_lift(a2, b2, c2, d2);
        } catch (const Error&) {
            continue;
        }
        ProjPoint3 x{{sample_cplx(rng), sample_cplx(rng), sample_cplx(rng), sample_cplx(rng)}};
        if (x.norm() < 0.1) continue;
        CHECK(chordal(apply_matrix(mm, j_map(x)), j_map(apply_matrix(mm, x))) < 1e-10);
    }
}
