#include <doctest.h>

#include "slicetw/grass.hpp"
#include "slicetw/surfaces.hpp"

using namespace slicetw;

namespace {

SliceFunction f_zero_on_minus() {
    return {HoloMap::var(), HoloMap::constant(0.0), HoloMap::constant(0.0),
            HoloMap::constant(0.0)};
}

} // namespace

TEST_CASE("transform closed forms of the rational-line examples") {
    HoloMap v = HoloMap::var(), zero = HoloMap::constant(0.0);
    Rng rng(1);

    TransformCurve c1 = transform({HoloMap::constant(2.0), zero, zero, zero});
    TransformCurve c2 = transform({zero, HoloMap::constant(2.0), zero, zero});
    TransformCurve c3 = transform(f_zero_on_minus());
    TransformCurve c4 = transform({zero, v, zero, zero});
    for (int s = 0; s < 100; ++s) {
        cplx w = sample_cplx(rng, 0.1, 1.8);
        ProjPoint5 p1 = c1.eval(w), p2 = c2.eval(w), p3 = c3.eval(w), p4 = c4.eval(w);
        for (int k = 0; k < 6; ++k) {
            CHECK(std::abs(p1[k] - ProjPoint5{{0, 0, -2, 0, 0, 1}}[k]) == 0);
            CHECK(std::abs(p2[k] - ProjPoint5{{0, 0, 0, 2, 0, 1}}[k]) == 0);
            CHECK(std::abs(p3[k] - ProjPoint5{{0, 0, -w, 0, 0, 1}}[k]) == 0);
            CHECK(std::abs(p4[k] - ProjPoint5{{0, 0, 0, w, 0, 1}}[k]) == 0);
        }
        CHECK(p3.klein_residual() < 1e-10);
    }
}

TEST_CASE("transform agrees with the wedge oracle and satisfies Klein") {
    HoloMap v = HoloMap::var(), zero = HoloMap::constant(0.0);
    SliceFunction fns[4] = {
        f_zero_on_minus(),
        {v, v, HoloMap::constant(-1.0), HoloMap::constant(-1.0)},
        {-pow(v, 2), v, zero, zero},
        {HoloMap::constant(-1.0) / v, v, zero, HoloMap::constant(1.0) / pow(v, 2)},
    };
    Rng rng(2);
    for (const SliceFunction& f : fns) {
        TransformCurve curve = transform(f);
        for (int s = 0; s < 250; ++s) {
            cplx w = sample_cplx(rng, 0.1, 1.8);
            ProjPoint5 p = curve.eval(w);
            CHECK(p.klein_residual() < 1e-10);
            ProjPoint5 oracle = line_through(lift(f, 0.0, w), lift(f, 1.0, w));
            CHECK(chordal(oracle, p) < 1e-12);
        }
        // each coordinate of a regular transform is holomorphic
        for (int k = 0; k < 6; ++k) {
            const double step = 1e-5;
            for (int s = 0; s < 32; ++s) {
                cplx w = sample_cplx(rng, 0.3, 1.5);
                cplx da = (curve.coord[size_t(k)](w + step) - curve.coord[size_t(k)](w - step)) /
                          (2 * step);
                cplx db = (curve.coord[size_t(k)](w + cplx(0, step)) -
                           curve.coord[size_t(k)](w - cplx(0, step))) /
                          (2.0 * cplx(0, step));
                CHECK(std::abs(da - db) < 1e-6 * (1 + std::abs(da)));
            }
        }
    }
}

TEST_CASE("transform of a stem-built function") {
    // the constant function 1 - Ii entered through its stem transforms onto
    // the constant line [0, 0, -2, 0, 0, 1]
    StemPair Fm{[](cplx) { return Quaternion::real(1); },
                [](cplx z) {
                    double sgn = z.imag() >= 0 ? 1.0 : -1.0;
                    return -sgn * Quaternion::unit_i();
                }};
    SliceFunction fm = from_stem(Fm);
    TransformCurve curve = transform(fm);
    Rng rng(9);
    for (int s = 0; s < 50; ++s) {
        cplx w = sample_cplx(rng, 0.1, 1.8);
        CHECK(chordal(curve.eval(w), ProjPoint5{{0, 0, -2, 0, 0, 1}}) < 1e-13);
    }
}

TEST_CASE("sigma is a real structure whose fixed points are fibres") {
    ProjPoint5 e1{{1, 0, 0, 0, 0, 0}};
    CHECK(chordal(sigma(e1), e1) == 0);

    Rng rng(3);
    for (int s = 0; s < 300; ++s) {
        ProjPoint5 p;
        for (int k = 0; k < 6; ++k) p[k] = sample_cplx(rng);
        if (p.norm() < 0.1) continue;
        CHECK(chordal(sigma(sigma(p)), p) < 1e-12);
    }

    // the f3 curve point at v = 2i moves under sigma
    ProjPoint5 gamma{{0, 0, cplx(0, -2), 0, 0, 1}};
    ProjPoint5 sg = sigma(gamma);
    CHECK(std::abs(sg[3] - cplx(0, -2)) == 0); // slot 4 picks up -conj(xi3)
    CHECK(chordal(sg, gamma) > 0.5);

    // Pluecker points of fibre lines are sigma-fixed
    for (int s = 0; s < 200; ++s) {
        Quaternion q = sample_quaternion(rng, 1.5, 0.0);
        FiberLine fiber{q};
        ProjPoint5 pl = line_through(fiber.at(1.0, 0.0), fiber.at(0.0, 1.0));
        CHECK(chordal(sigma(pl), pl) < 1e-12);
    }
}

TEST_CASE("inverse transform") {
    TransformCurve c3 = transform(f_zero_on_minus());
    SliceFunction back = inverse_transform(c3);
    Rng rng(4);
    for (int s = 0; s < 200; ++s) {
        Quaternion x = sample_quaternion(rng);
        CHECK(dist(back.eval(x), f_zero_on_minus().eval(x)) < 1e-13 * (1 + x.norm()));
    }

    // constant curve [0,0,0,2,0,1] recovers 1 + Ii
    TransformCurve c;
    c.coord = {SliceSlot(HoloMap::constant(0.0)), SliceSlot(HoloMap::constant(0.0)),
               SliceSlot(HoloMap::constant(0.0)), SliceSlot(HoloMap::constant(2.0)),
               SliceSlot(HoloMap::constant(0.0)), SliceSlot(HoloMap::constant(1.0))};
    c.expression_built = true;
    SliceFunction one_plus = inverse_transform(c);
    CHECK(dist(one_plus.eval(Quaternion::unit_i()), {}) < 1e-14);
    CHECK(dist(one_plus.eval(-Quaternion::unit_i()), Quaternion::real(2)) < 1e-14);

    // round trip through a quaddiag splitting
    SliceFunction fq = solve_quaddiag_splitting(0.2, 0.7, 0.3);
    TransformCurve cq = transform(fq);
    SliceFunction back2 = inverse_transform(cq);
    TransformCurve cq2 = transform(back2);
    for (int s = 0; s < 100; ++s) {
        cplx w = sample_cplx(rng, 0.2, 1.6);
        CHECK(chordal(cq.eval(w), cq2.eval(w)) < 1e-12);
    }

    // a curve with vanishing xi6 has no affine normalization
    TransformCurve badc;
    badc.coord = {SliceSlot(HoloMap::constant(0.0)), SliceSlot(HoloMap::constant(0.0)),
                  SliceSlot(HoloMap::constant(1.0)), SliceSlot(HoloMap::constant(0.0)),
                  SliceSlot(HoloMap::constant(0.0)), SliceSlot(HoloMap::constant(0.0))};
    badc.expression_built = true;
    CHECK_THROWS_AS((void)inverse_transform(badc), Error);
}

TEST_CASE("twistor line finder") {
    // c = 2 curve: [1, 2s, -v, v, s/2, 1] with s = (1 - v^2)^{1/2}
    HoloMap v = HoloMap::var();
    HoloMap s = sqrt(HoloMap::constant(1.0) - pow(v, 2));
    SliceFunction two{v, v, HoloMap::constant(2.0) * s, HoloMap::constant(0.5) * s};
    FinderOptions opts;
    opts.grid = 300;
    auto hits = find_twistor_lines(transform(two), {-3, 3, -3, 3}, opts);
    REQUIRE(hits.size() == 2);
    CHECK(std::abs(hits[0].v - cplx(-1.0)) < 1e-9);
    CHECK(std::abs(hits[1].v - cplx(1.0)) < 1e-9);
    CHECK(hits[0].residual < 1e-8);
    CHECK(hits[1].residual < 1e-8);

    // nu strictly inside (0, pi/2) gives no twistor lines
    SliceFunction none = solve_quaddiag_splitting(0.0, 0.0, 0.5);
    CHECK(find_twistor_lines(transform(none), {-3, 3, -3, 3}, opts).empty());

    // f3: the only candidate sits on the boundary of C+, so a search within
    // the open upper half plane comes back empty
    auto upper = find_twistor_lines(transform(f_zero_on_minus()), {-3, 3, 0.05, 3}, opts);
    CHECK(upper.empty());
}

TEST_CASE("hermitian affine criterion") {
    HoloMap v = HoloMap::var(), zero = HoloMap::constant(0.0);

    // Moebius members (Cx + D)^{-.} (Ax + B)(1 - Ii)/2 with real SL(2) data
    const double abcd[3][4] = {{1, 0, 0, 1}, {2, 1, 1, 1}, {1, 1, 0, 1}};
    for (const auto& m : abcd) {
        HoloMap g = (HoloMap::constant(m[0]) * v + HoloMap::constant(m[1])) /
                    (HoloMap::constant(m[2]) * v + HoloMap::constant(m[3]));
        SliceFunction member{g, zero, zero, zero};
        AffineCheckReport r = check_affine_transform(member, m[3], m[2]);
        CHECK(r.affine);
        CHECK(std::abs(r.hermitian_residual) < 1e-10);
    }

    // (2,1;1,1): the cleared transform is [0,0,-(2v+1),0,0,v+1]
    {
        HoloMap g = (HoloMap::constant(2.0) * v + HoloMap::constant(1.0)) /
                    (v + HoloMap::constant(1.0));
        SliceFunction member{g, zero, zero, zero};
        TransformCurve curve = transform(member);
        cplx w(0.4, 0.9);
        ProjPoint5 p = curve.eval(w);
        cplx clear = w + 1.0;
        CHECK(std::abs(clear * p[2] - (-(2.0 * w + 1.0))) < 1e-13);
        AffineCheckReport r = check_affine_transform(member, 1.0, 1.0);
        CHECK(r.affine);
        CHECK(std::abs(r.hermitian_residual) < 1e-10);
    }

    // x a + b extends to R and violates the criterion: h_i(a, a) = |a|^2
    SliceFunction ext = SliceFunction::affine({1, 0, 1, 0}, {});
    AffineCheckReport bad = check_affine_transform(ext, 1.0, 0.0);
    CHECK(std::abs(bad.hermitian_residual) > 1e-3);
    CHECK(std::abs(bad.hermitian_residual - cplx(2.0)) < 1e-9);
    CHECK_FALSE(bad.affine); // xi1 = 2 v^2 is quadratic after clearing

    // x^2 is not slice affine at all
    SliceFunction sq{pow(v, 2), pow(v, 2), zero, zero};
    CHECK_THROWS_AS((void)check_affine_transform(sq, 1.0, 0.0), Error);

    CHECK_THROWS_AS((void)check_affine_transform(ext, 0.0, 0.0), Error);
}

TEST_CASE("the nondiagonal quadric curve and its claimed fixed point") {
    // splitting g = v, ghat = -v, h = 2i + v/2, hhat = 2i - v/2; its transform
    // is [-(5/4 v^2 + 4), 2i + v/2, -v, -v, 2i - v/2, 1]
    HoloMap v = HoloMap::var();
    HoloMap i2 = HoloMap::constant(cplx(0, 2));
    SliceFunction f{v, -v, i2 + v / HoloMap::constant(2.0), i2 - v / HoloMap::constant(2.0)};
    TransformCurve curve = transform(f);
    Rng rng(12);
    for (int s = 0; s < 100; ++s) {
        cplx w = sample_cplx(rng, 0.1, 1.8);
        ProjPoint5 p = curve.eval(w);
        CHECK(std::abs(p[0] - (-(1.25 * w * w + 4.0))) < 1e-13);
        CHECK(std::abs(p[1] - (cplx(0, 2) + w / 2.0)) < 1e-14);
        CHECK(std::abs(p[2] + w) == 0);
        CHECK(std::abs(p[3] + w) == 0);
        CHECK(std::abs(p[4] - (cplx(0, 2) - w / 2.0)) < 1e-14);
        CHECK(p.klein_residual() < 1e-12);
    }

    // at v = -4i the curve reads [16, 0, 4i, 4i, 4i, 1] while sigma of it is
    // [16, -4i, 4i, 4i, 0, 1]; the point is not sigma-fixed
    ProjPoint5 at = curve.eval(cplx(0, -4));
    const cplx expected[6] = {16.0, 0.0, cplx(0, 4), cplx(0, 4), cplx(0, 4), 1.0};
    for (int k = 0; k < 6; ++k) CHECK(std::abs(at[k] - expected[k]) < 1e-12);
    ProjPoint5 sat = sigma(at);
    const cplx sexpected[6] = {16.0, cplx(0, -4), cplx(0, 4), cplx(0, 4), 0.0, 1.0};
    for (int k = 0; k < 6; ++k) CHECK(std::abs(sat[k] - sexpected[k]) < 1e-12);
    CHECK(chordal(sat, at) > 0.1);

    // and the finder agrees: no sigma-fixed point anywhere near
    FinderOptions opts;
    opts.grid = 160;
    CHECK(find_twistor_lines(curve, {-6, 6, -6, 6}, opts).empty());
}

TEST_CASE("hermitian product convention") {
    Quaternion p{1, 2, 3, 4}; // p1 = 1 + 2i, p2 = 3 + 4i
    Quaternion q{0, 1, 1, 0}; // q1 = i, q2 = 1
    cplx h = hermitian_i(p, q);
    // p1 conj(q1) + p2 conj(q2) = (1 + 2i)(-i) + (3 + 4i)
    CHECK(std::abs(h - (cplx(1, 2) * cplx(0, -1) + cplx(3, 4))) < 1e-15);
    CHECK(std::abs(hermitian_i(p, p).imag()) < 1e-15);
    CHECK(hermitian_i(p, p).real() == doctest::Approx(p.norm_sq()));
}
