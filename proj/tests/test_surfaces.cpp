#include <doctest.h>

#include "slicetw/surfaces.hpp"
#include "slicetw/twistor.hpp"

using namespace slicetw;

namespace {

SliceFunction f_zero_on_minus() {
    return {HoloMap::var(), HoloMap::constant(0.0), HoloMap::constant(0.0),
            HoloMap::constant(0.0)};
}

} // namespace

TEST_CASE("homogeneity of catalog polynomials") {
    Rng rng(1);
    const HomoPoly polys[] = {quadric_q(),        quaddiag(0.2, 0.7, 0.3), quadnondiag(0.5),
                              plane_pair(),       quadric_cone(),          cubic_nonnormal1(),
                              cubic_nonnormal2(), cubic_cone(2.0),         quartic_scroll()};
    for (const HomoPoly& P : polys) {
        for (int s = 0; s < 50; ++s) {
            std::array<cplx, 4> X{sample_cplx(rng), sample_cplx(rng), sample_cplx(rng),
                                  sample_cplx(rng)};
            cplx lambda = sample_cplx(rng, 0.3, 1.5);
            std::array<cplx, 4> XL{lambda * X[0], lambda * X[1], lambda * X[2], lambda * X[3]};
            cplx scaled = std::pow(lambda, P.degree) * P.eval(X);
            CHECK(std::abs(P.eval(XL) - scaled) < 1e-10 * (1 + std::abs(scaled)));
        }
    }
    CHECK_THROWS_AS((void)HomoPoly::make(2, {{{1, 0, 0, 0}, 1.0}}), Error);
    CHECK_THROWS_AS((void)HomoPoly::make(1, {{{1, 0, 0, 0}, 0.0}}), Error);
}

TEST_CASE("surface JSON wire format") {
    HomoPoly q = quartic_scroll();
    HomoPoly back = HomoPoly::from_json(q.to_json());
    CHECK(back.degree == q.degree);
    Rng rng(2);
    for (int s = 0; s < 20; ++s) {
        std::array<cplx, 4> X{sample_cplx(rng), sample_cplx(rng), sample_cplx(rng),
                              sample_cplx(rng)};
        CHECK(std::abs(back.eval(X) - q.eval(X)) == 0);
    }
}

TEST_CASE("contains_lift on the catalog splittings") {
    HoloMap v = HoloMap::var(), zero = HoloMap::constant(0.0);

    // real slice functions live on the quadric Q
    SliceFunction real_poly{pow(v, 2) + HoloMap::constant(1.0),
                            pow(v, 2) + HoloMap::constant(1.0), zero, zero};
    ContainsReport rq = contains_lift(quadric_q(), real_poly, 400, 11);
    CHECK(rq.contained);
    CHECK(rq.residual < 1e-10);
    CHECK(rq.exact_checked);
    CHECK(rq.exact_zero);

    // f0 is not real; its lift leaves Q
    ContainsReport rneg = contains_lift(quadric_q(), f_zero_on_minus(), 400, 11);
    CHECK_FALSE(rneg.contained);
    CHECK(rneg.residual > 1e-3);

    ContainsReport rc1 =
        contains_lift(cubic_nonnormal1(), {-pow(v, 2), v, zero, zero}, 400, 11);
    CHECK(rc1.contained);
    CHECK(rc1.residual < 1e-10);

    SliceFunction f2{HoloMap::constant(-1.0) / v, v, zero, HoloMap::constant(1.0) / pow(v, 2)};
    ContainsReport rc2 = contains_lift(cubic_nonnormal2(), f2, 400, 11);
    CHECK(rc2.contained);
    CHECK(rc2.residual < 1e-8);

    SliceFunction cone_fn{zero, v, zero, HoloMap::constant(-1.0) / v};
    ContainsReport rc3 = contains_lift(quadric_cone(), cone_fn, 400, 11);
    CHECK(rc3.contained);
    CHECK(rc3.residual < 1e-8);
}

TEST_CASE("plane splitting solver") {
    HoloMap v = HoloMap::var(), zero = HoloMap::constant(0.0);

    SliceFunction fx3 = solve_plane_splitting(0, 0, 0, 1, v, zero);
    Rng rng(3);
    for (int s = 0; s < 100; ++s) {
        Quaternion x = sample_quaternion(rng);
        CHECK(dist(fx3.eval(x), f_zero_on_minus().eval(x)) < 1e-13 * (1 + x.norm()));
    }

    // X2 = 0 forces g = hhat = 0; the free slots feed h and ghat
    SliceFunction fx2 = solve_plane_splitting(0, 0, 1, 0, zero, v);
    CHECK(contains_lift(plane(0, 0, 1, 0), fx2, 200, 4).contained);
    CHECK(fx2.g()(cplx(0.3, 0.4)) == cplx(0.0));

    SliceFunction fsum = solve_plane_splitting(1, 0, 0, 1, v, HoloMap::constant(1.0));
    CHECK(std::abs(fsum.h()(cplx(0.3, 0.4)) + 1.0) < 1e-15);
    CHECK(std::abs(fsum.ghat()(cplx(0.3, 0.4))) < 1e-15);
    ContainsReport r = contains_lift(plane(1, 0, 0, 1), fsum, 200, 4, 1e-12);
    CHECK(r.contained);
    CHECK(r.residual < 1e-12);

    CHECK_THROWS_AS((void)solve_plane_splitting(1, 1, 0, 0, v, zero), Error);
}

TEST_CASE("quaddiag splitting solver") {
    // lambda = mu, nu = pi/2 reproduces h = c (1 - v^2)^{1/2} with c = e^lambda
    const double lam = std::log(2.0);
    SliceFunction f = solve_quaddiag_splitting(lam, lam, M_PI / 2);
    cplx probe(0.3, 0.8);
    cplx h = f.h()(probe);
    cplx expect = 2.0 * std::sqrt(cplx(1.0) - probe * probe);
    CHECK(std::min(std::abs(h - expect), std::abs(h + expect)) < 1e-12);
    CHECK(std::abs(f.ghat()(probe) - probe) < 1e-14); // kappa = 1

    const double params[3][3] = {{0, 0, 0}, {0.3, 0.3, M_PI / 2}, {0.2, 0.7, 0.3}};
    for (const auto& p : params) {
        SliceFunction fp = solve_quaddiag_splitting(p[0], p[1], p[2]);
        ContainsReport r = contains_lift(quaddiag(p[0], p[1], p[2]), fp, 500, 5, 1e-8, 1e-3);
        CHECK(r.contained);
        CHECK(r.residual < 1e-8);
        // the opposite sign branch works as well
        SliceFunction fm = solve_quaddiag_splitting(p[0], p[1], p[2], -1);
        CHECK(contains_lift(quaddiag(p[0], p[1], p[2]), fm, 200, 5, 1e-8, 1e-3).contained);
    }

    // the printed exponent e^{mu - nu} does not solve the system when
    // lambda, mu, nu differ; the derived kappa = e^{mu - lambda} does
    {
        const double l = 0.2, m = 0.7, n = 0.3;
        HoloMap v = HoloMap::var();
        SliceFunction good = solve_quaddiag_splitting(l, m, n);
        SliceFunction printed{good.g().tree(), HoloMap::constant(std::exp(m - n)) * v,
                              good.h().tree(), good.hhat().tree()};
        ContainsReport bad = contains_lift(quaddiag(l, m, n), printed, 200, 6, 1e-8, 1e-3);
        CHECK_FALSE(bad.contained);
        CHECK(bad.residual > 1e-3);
    }
}

TEST_CASE("solver-built expressions survive print and reparse") {
    SliceFunction f = solve_quaddiag_splitting(0.2, 0.7, 0.3);
    const SliceSlot* slots[4] = {&f.g(), &f.ghat(), &f.h(), &f.hhat()};
    Rng rng(17);
    for (const auto* s : slots) {
        HoloMap back = HoloMap::parse(s->tree().str());
        for (int k = 0; k < 40; ++k) {
            cplx v = sample_cplx(rng, 0.2, 1.6);
            if (s->tree().cut_distance(v) < 1e-3) continue;
            cplx a = s->tree().eval(v), b = back.eval(v);
            CHECK(std::abs(a - b) < 1e-12 * (1 + std::abs(a)));
        }
    }
}

TEST_CASE("cubic cone splitting solver") {
    HoloMap v = HoloMap::var();
    for (double c : {0.0, 1.0, 2.0}) {
        SliceFunction f = solve_cubic_cone_splitting(c, v);
        ContainsReport r = contains_lift(cubic_cone(c), f, 400, 7, 1e-8, 1e-3);
        CHECK(r.contained);
        CHECK(r.residual < 1e-8);
    }
    // nodal case: hhat = sqrt(v^3 - v^2)
    SliceFunction nodal = solve_cubic_cone_splitting(0.0, v);
    cplx probe(0.4, 0.9);
    CHECK(std::abs(nodal.hhat()(probe) - std::sqrt(probe * probe * probe - probe * probe)) <
          1e-14);
}

TEST_CASE("fiber cardinality") {
    HomoPoly K = quartic_scroll();
    // fibres over the parabola t^2 + t i are contained
    for (double t : {0.3, 0.7, 1.5}) {
        FiberReport r = fiber_cardinality(K, {t * t, t, 0, 0});
        CHECK(r.contained);
    }
    // generic fibres meet in 4 simple points
    FiberReport gen = fiber_cardinality(K, {1, 0, 1, 0});
    CHECK(gen.count == 4);
    CHECK(gen.generic);
    // points of the paraboloid q0 = 1/4 - (q2^2 + q3^2) are tangency points
    FiberReport tan = fiber_cardinality(K, {0.25 - 0.01, 0, 0.1, 0});
    CHECK(tan.tangent);
    CHECK_FALSE(tan.contained);

    // the quadric Q contains exactly the fibres over real points
    HomoPoly Q = quadric_q();
    CHECK(fiber_cardinality(Q, {0.7, 0, 0, 0}).contained);
    FiberReport over_ci = fiber_cardinality(Q, {1, 2, 0, 0});
    CHECK_FALSE(over_ci.contained);
    CHECK(over_ci.count == 2);

    // a plane meets a generic fibre once; the fibre over 0 sits inside X3 = 0
    HomoPoly H = plane(0, 0, 0, 1);
    CHECK(fiber_cardinality(H, {0.3, 0.4, 0.1, 0}).count == 1);
}

TEST_CASE("discriminant scan") {
    HomoPoly H = plane(0, 0, 0, 1);
    DiscriminantReport rep = discriminant_scan(
        H, {-0.5, 0.5, -0.5, 0.5, 0, 0, 0, 0}, {3, 3, 1, 1});
    int contained = 0;
    for (const auto& cell : rep.cells) {
        if (cell.fiber.contained)
            ++contained;
        else
            CHECK(cell.fiber.count == 1);
    }
    CHECK(contained == 1); // only the fibre over q = 0

    std::string csv = rep.to_csv();
    CHECK(csv.rfind("q0,q1,q2,q3,count,flags\n", 0) == 0);
    CHECK(csv.find("contained") != std::string::npos);

    // tangency shows up along the paraboloid
    DiscriminantReport scroll = discriminant_scan(
        quartic_scroll(), {0.25 - 0.0225, 0.25 - 0.0225, 0, 0, 0.15, 0.15, 0, 0}, {1, 1, 1, 1});
    CHECK(scroll.cells.at(0).fiber.tangent);

    // Q contains the fibres exactly over the real row of a grid on C_i
    DiscriminantReport qgrid = discriminant_scan(
        quadric_q(), {-0.5, 0.5, -0.4, 0.4, 0, 0, 0, 0}, {3, 3, 1, 1});
    for (const auto& cell : qgrid.cells) {
        if (cell.q.q1 == 0)
            CHECK(cell.fiber.contained);
        else {
            CHECK_FALSE(cell.fiber.contained);
            CHECK(cell.fiber.count == 2);
        }
    }

    CHECK_THROWS_AS((void)discriminant_scan(H, {0, 1, 0, 1, 0, 1, 0, 1}, {65, 65, 65, 65}),
                    Error);
}

namespace {

// least-squares null vector of the quadric-membership system: samples the
// lift and looks for coefficients of a quadric vanishing on it
std::optional<HomoPoly> fit_quadric_through_lift(const SliceFunction& f, Rng& rng) {
    const std::array<std::array<int, 2>, 10> pairs{{{0, 0},
                                                    {0, 1},
                                                    {0, 2},
                                                    {0, 3},
                                                    {1, 1},
                                                    {1, 2},
                                                    {1, 3},
                                                    {2, 2},
                                                    {2, 3},
                                                    {3, 3}}};
    const int n = 60;
    std::vector<std::array<cplx, 10>> rows;
    for (int s = 0; s < n; ++s) {
        cplx u = sample_cplx(rng), v = sample_cplx(rng, 0.1, 1.8);
        ProjPoint3 X = lift(f, u, v);
        std::array<cplx, 10> row;
        double scale = 0;
        for (int k = 0; k < 10; ++k) {
            row[size_t(k)] = X[pairs[size_t(k)][0]] * X[pairs[size_t(k)][1]];
            scale = std::max(scale, std::abs(row[size_t(k)]));
        }
        for (auto& e : row) e /= scale;
        rows.push_back(row);
    }
    // H = A^H A, then inverse power iteration for the smallest eigenvector
    cplx H[10][10] = {};
    for (const auto& row : rows)
        for (int a = 0; a < 10; ++a)
            for (int b = 0; b < 10; ++b) H[a][b] += std::conj(row[size_t(a)]) * row[size_t(b)];
    auto solve10 = [&](std::array<cplx, 10> rhs, double shift) {
        cplx m[10][11];
        for (int r = 0; r < 10; ++r) {
            for (int c = 0; c < 10; ++c) m[r][c] = H[r][c] + (r == c ? cplx(shift) : cplx(0));
            m[r][10] = rhs[size_t(r)];
        }
        for (int col = 0; col < 10; ++col) {
            int piv = col;
            for (int r = col + 1; r < 10; ++r)
                if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
            for (int c = 0; c < 11; ++c) std::swap(m[piv][c], m[col][c]);
            for (int r = 0; r < 10; ++r) {
                if (r == col || m[col][col] == 0.0) continue;
                cplx fct = m[r][col] / m[col][col];
                for (int c = col; c < 11; ++c) m[r][c] -= fct * m[col][c];
            }
        }
        std::array<cplx, 10> x;
        for (int r = 0; r < 10; ++r) x[size_t(r)] = m[r][10] / m[r][r];
        return x;
    };
    std::array<cplx, 10> x;
    x.fill(cplx(1.0));
    for (int iter = 0; iter < 50; ++iter) {
        x = solve10(x, 1e-12);
        double nx = 0;
        for (const auto& e : x) nx += std::norm(e);
        nx = std::sqrt(nx);
        for (auto& e : x) e /= nx;
    }
    // membership residual of the candidate over the sampled rows
    double worst = 0;
    for (const auto& row : rows) {
        cplx val = 0;
        for (int k = 0; k < 10; ++k) val += row[size_t(k)] * x[size_t(k)];
        worst = std::max(worst, std::abs(val));
    }
    if (worst > 1e-9) return std::nullopt;
    std::vector<HomoPoly::Term> terms;
    for (int k = 0; k < 10; ++k) {
        if (std::abs(x[size_t(k)]) < 1e-11) continue;
        HomoPoly::Term t;
        t.e = {0, 0, 0, 0};
        t.e[size_t(pairs[size_t(k)][0])] += 1;
        t.e[size_t(pairs[size_t(k)][1])] += 1;
        t.coef = x[size_t(k)];
        terms.push_back(t);
    }
    return HomoPoly::make(2, std::move(terms));
}

} // namespace

TEST_CASE("the nondiagonal splitting lies on a quadric, but not the printed one") {
    // g = v, ghat = -v, h = 2i + v/2, hhat = 2i - v/2 leaves nonvanishing
    // u-coefficients in the k-family quadric for every k
    HoloMap v = HoloMap::var();
    HoloMap i2 = HoloMap::constant(cplx(0, 2));
    SliceFunction f{v, -v, i2 + v / HoloMap::constant(2.0), i2 - v / HoloMap::constant(2.0)};

    for (double k : {0.0, 0.25, 0.5, 0.9}) {
        ContainsReport r = contains_lift(quadnondiag(k), f, 200, 13);
        CHECK_FALSE(r.contained);
        CHECK(r.residual > 1e-3);
    }

    // a null-space search over all quadrics finds a surface the lift sits on
    Rng rng(14);
    auto found = fit_quadric_through_lift(f, rng);
    REQUIRE(found.has_value());
    ContainsReport check = contains_lift(*found, f, 400, 15, 1e-8);
    CHECK(check.contained);
    CHECK(check.residual < 1e-8);

    // eliminating the membership system by hand gives the one-dimensional
    // solution family; its nonsingular representative contains the lift
    // exactly, confirmed by the rational cross-check
    cplx i(0, 1);
    HomoPoly exact = HomoPoly::make(2, {{{2, 0, 0, 0}, 1.0},
                                        {{1, 1, 0, 0}, 1.0},
                                        {{1, 0, 1, 0}, -i / 4.0},
                                        {{1, 0, 0, 1}, i / 2.0},
                                        {{0, 2, 0, 0}, -1.0},
                                        {{0, 1, 1, 0}, i / 2.0},
                                        {{0, 1, 0, 1}, i / 4.0}});
    ContainsReport er = contains_lift(exact, f, 400, 16, 1e-12);
    CHECK(er.contained);
    CHECK(er.residual < 1e-12);
    CHECK(er.exact_checked);
    CHECK(er.exact_zero);
}

TEST_CASE("fibre multiplicities always sum to the degree") {
    Rng rng(10);
    const HomoPoly polys[] = {quadric_q(), quadric_cone(), cubic_nonnormal2(), quartic_scroll()};
    for (const HomoPoly& P : polys) {
        for (int s = 0; s < 1000; ++s) {
            Quaternion q = sample_quaternion(rng, 2.0, 0.0);
            FiberReport r = fiber_cardinality(P, q);
            if (r.contained) continue;
            int total = 0;
            for (int m : r.multiplicities) total += m;
            CHECK(total == P.degree);
        }
    }
}

TEST_CASE("membership residual catches near misses") {
    // a perturbed coefficient must push the residual above tolerance
    HoloMap v = HoloMap::var(), zero = HoloMap::constant(0.0);
    HomoPoly almost = HomoPoly::make(
        3, {{{1, 0, 0, 2}, 1.0}, {{0, 2, 1, 0}, cplx(1.0 + 1e-5)}});
    ContainsReport r = contains_lift(almost, {-pow(v, 2), v, zero, zero}, 200, 9);
    CHECK_FALSE(r.contained);
    CHECK(r.residual > 1e-7);
}
