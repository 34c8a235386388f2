#include "slicetw/grass.hpp"

#include <algorithm>
#include <cmath>

namespace slicetw {

namespace {

/// steps a pattern search down to sub-ulp scale; r is the residual functional
cplx refine_minimum(const std::function<double(cplx)>& r, cplx start, double step) {
    cplx best = start;
    double best_val = r(best);
    while (step > 1e-18 * std::max(1.0, std::abs(best))) {
        bool moved = true;
        int guard = 0;
        while (moved && guard++ < 4096) {
            moved = false;
            const std::array<cplx, 4> probes{best + step, best - step, best + cplx(0, step),
                                             best - cplx(0, step)};
            for (cplx p : probes) {
                double val = r(p);
                if (val < best_val) {
                    best_val = val;
                    best = p;
                    moved = true;
                }
            }
        }
        step *= 0.5;
    }
    return best;
}

} // namespace

double ProjPoint5::norm() const {
    double s = 0;
    for (const auto& x : xi) s += std::norm(x);
    return std::sqrt(s);
}

double ProjPoint5::klein_residual() const {
    cplx k = xi[0] * xi[5] - xi[1] * xi[4] + xi[2] * xi[3];
    double scale = 0;
    for (const auto& x : xi) scale = std::max(scale, std::norm(x));
    return std::abs(k) / std::max(1e-300, scale);
}

double chordal(const ProjPoint5& p, const ProjPoint5& q) {
    // wedge form of the chordal distance; stable near zero
    double np = 0, nq = 0, wedge = 0;
    for (int k = 0; k < 6; ++k) {
        np += std::norm(p[k]);
        nq += std::norm(q[k]);
        for (int l = k + 1; l < 6; ++l) wedge += std::norm(p[k] * q[l] - p[l] * q[k]);
    }
    if (np == 0 || nq == 0) fail(Err::InvalidArgument, "projective point must be nonzero");
    return std::min(1.0, std::sqrt(wedge / (np * nq)));
}

ProjPoint5 sigma(const ProjPoint5& p) {
    return {{std::conj(p[0]), std::conj(p[4]), -std::conj(p[3]), -std::conj(p[2]),
             std::conj(p[1]), std::conj(p[5])}};
}

ProjPoint5 line_through(const ProjPoint3& p, const ProjPoint3& q) {
    auto w = [&](int a, int b) { return p[a] * q[b] - p[b] * q[a]; };
    // pointwise wedge, then the complement that exchanges a line's point
    // coordinates for its plane coordinates
    cplx p01 = w(0, 1), p02 = w(0, 2), p03 = w(0, 3);
    cplx p12 = w(1, 2), p13 = w(1, 3), p23 = w(2, 3);
    return {{p23, -p13, p12, p03, -p02, p01}};
}

ProjPoint5 TransformCurve::eval(cplx v) const {
    ProjPoint5 p;
    for (int k = 0; k < 6; ++k) p[k] = coord[size_t(k)](v);
    return p;
}

std::array<std::string, 6> TransformCurve::exprs() const {
    if (!expression_built) fail(Err::InvalidArgument, "curve is not expression-built");
    std::array<std::string, 6> out;
    for (int k = 0; k < 6; ++k) out[size_t(k)] = coord[size_t(k)].tree().str();
    return out;
}

TransformCurve transform(const SliceFunction& f) {
    TransformCurve curve;
    curve.domain = f.domain();
    if (f.expression_built()) {
        const HoloMap &g = f.g().tree(), &gh = f.ghat().tree();
        const HoloMap &h = f.h().tree(), &hh = f.hhat().tree();
        curve.coord = {SliceSlot(g * gh + hh * h), SliceSlot(h),   SliceSlot(-g),
                       SliceSlot(gh),             SliceSlot(hh),  SliceSlot(HoloMap::constant(1.0))};
        curve.expression_built = true;
    } else {
        auto g = f.g(), gh = f.ghat(), h = f.h(), hh = f.hhat();
        curve.coord = {SliceSlot([g, gh, h, hh](cplx v) { return g(v) * gh(v) + hh(v) * h(v); }),
                       SliceSlot([h](cplx v) { return h(v); }),
                       SliceSlot([g](cplx v) { return -g(v); }),
                       SliceSlot([gh](cplx v) { return gh(v); }),
                       SliceSlot([hh](cplx v) { return hh(v); }),
                       SliceSlot([](cplx) { return cplx(1.0); })};
    }
    return curve;
}

SliceFunction inverse_transform(const TransformCurve& curve, unsigned long long seed,
                                int samples) {
    Rng rng(seed);
    for (int s = 0; s < samples; ++s) {
        cplx v = curve.domain.sample(rng);
        ProjPoint5 p = curve.eval(v);
        if (std::abs(p[5]) < 1e-12 * std::max(1.0, p.norm()))
            fail(Err::XiSixVanishes, "xi6 vanishes on the domain; no affine normalization");
    }
    auto ratio = [&](int k, int sign) {
        if (curve.expression_built) {
            HoloMap m = curve.coord[size_t(k)].tree() / curve.coord[5].tree();
            return SliceSlot(sign > 0 ? m : -m);
        }
        auto num = curve.coord[size_t(k)];
        auto den = curve.coord[5];
        return SliceSlot([num, den, sign](cplx v) { return double(sign) * num(v) / den(v); });
    };
    // g = -xi3, h = xi2, ghat = xi4, hhat = xi5 after clearing xi6
    return {ratio(2, -1), ratio(3, +1), ratio(1, +1), ratio(4, +1), curve.domain};
}

std::vector<TwistorLineHit> find_twistor_lines(const TransformCurve& curve,
                                               const std::array<double, 4>& box,
                                               const FinderOptions& opts) {
    auto residual = [&](cplx v) {
        try {
            ProjPoint5 p = curve.eval(v);
            if (p.norm() == 0.0) return 1.0;
            return chordal(sigma(p), p);
        } catch (const Error&) {
            return 1.0; // poles in the coordinates cannot be fixed points
        }
    };
    const double re0 = box[0], re1 = box[1], im0 = box[2], im1 = box[3];
    const int n = std::max(8, opts.grid);
    std::vector<double> grid(size_t(n) * size_t(n));
    auto at = [&](int ix, int iy) { return grid[size_t(iy) * size_t(n) + size_t(ix)]; };
    auto point = [&](int ix, int iy) {
        return cplx(re0 + (re1 - re0) * double(ix) / double(n - 1),
                    im0 + (im1 - im0) * double(iy) / double(n - 1));
    };
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix) grid[size_t(iy) * size_t(n) + size_t(ix)] = residual(point(ix, iy));

    std::vector<TwistorLineHit> hits;
    double cell = std::max(re1 - re0, im1 - im0) / double(n - 1);
    for (int iy = 0; iy < n; ++iy) {
        for (int ix = 0; ix < n; ++ix) {
            double r = at(ix, iy);
            if (r > opts.coarse_cutoff) continue;
            bool is_min = true;
            for (int dy = -1; dy <= 1 && is_min; ++dy)
                for (int dx = -1; dx <= 1 && is_min; ++dx) {
                    if (!dx && !dy) continue;
                    int jx = ix + dx, jy = iy + dy;
                    if (jx < 0 || jy < 0 || jx >= n || jy >= n) continue;
                    if (at(jx, jy) < r) is_min = false;
                }
            if (!is_min) continue;
            cplx v = refine_minimum(residual, point(ix, iy), cell);
            // a refined minimum that left the closed box is not a candidate
            if (v.real() < re0 || v.real() > re1 || v.imag() < im0 || v.imag() > im1) continue;
            double rv = residual(v);
            if (rv >= opts.tol) continue;
            bool duplicate = false;
            for (auto& hit : hits) {
                if (std::abs(hit.v - v) < opts.dedup_radius) {
                    duplicate = true;
                    if (rv < hit.residual) hit = {v, rv};
                }
            }
            if (!duplicate) hits.push_back({v, rv});
        }
    }
    std::sort(hits.begin(), hits.end(),
              [](const TwistorLineHit& a, const TwistorLineHit& b) {
                  return a.v.real() != b.v.real() ? a.v.real() < b.v.real()
                                                  : a.v.imag() < b.v.imag();
              });
    return hits;
}

cplx hermitian_i(const Quaternion& p, const Quaternion& q) {
    return p.c1() * std::conj(q.c1()) + p.c2() * std::conj(q.c2());
}

AffineCheckReport check_affine_transform(const SliceFunction& f, cplx A, cplx B,
                                         unsigned long long seed, int samples, double tol) {
    if (A == 0.0 && B == 0.0) fail(Err::InvalidArgument, "A and B cannot both vanish");
    // the affine factor A + x B as a slice function
    HoloMap v = HoloMap::var();
    SliceFunction affine_factor{HoloMap::constant(A) + HoloMap::constant(B) * v,
                                HoloMap::constant(std::conj(A)) + HoloMap::constant(std::conj(B)) * v,
                                HoloMap::constant(0.0), HoloMap::constant(0.0), f.domain()};
    SliceFunction F = slice_product(affine_factor, f);
    SliceFunction s = F.derivative();
    SliceFunction s2 = s.derivative();

    Rng rng(seed);
    double rs = 0;
    for (int k = 0; k < samples; ++k) {
        Quaternion x = sample_quaternion(rng, 1.5, 0.2);
        rs = std::max(rs, s2.eval(x).norm());
    }
    if (rs > tol)
        fail(Err::NotSliceAffine, "slice derivative of (A + xB) . f is not slice constant");

    AffineCheckReport rep;
    Quaternion xp{0.3, 1.0, 0, 0}, xm{0.3, -1.0, 0, 0};
    rep.f_plus = s.eval(xp);
    rep.f_minus = s.eval(xm);
    auto remainder = [&](Quaternion x) { return F.eval(x) - x * s.eval(x); };
    rep.g_plus = remainder(xp);
    rep.g_minus = remainder(xm);
    rep.hermitian_residual = hermitian_i(A * rep.f_plus - B * rep.g_plus,
                                         std::conj(A) * rep.f_minus - std::conj(B) * rep.g_minus);

    // cleared transform coordinates (A + Bv) * xi_k must have degree <= 1
    TransformCurve curve = transform(f);
    const int m = 9;
    double fit = 0;
    for (int k = 0; k < 6; ++k) {
        // least squares fit c0 + c1 v over m points of the domain
        std::array<cplx, m> vs, ys;
        Rng rng2(seed + 17);
        for (int p = 0; p < m; ++p) {
            vs[size_t(p)] = curve.domain.sample(rng2);
            cplx clear = A + B * vs[size_t(p)];
            ys[size_t(p)] = clear * curve.coord[size_t(k)](vs[size_t(p)]) /
                            curve.coord[5](vs[size_t(p)]);
        }
        // hermitian normal equations for min sum |y - (c0 + c1 v)|^2
        cplx sv = 0, sy = 0, svy = 0;
        double svv = 0;
        for (int p = 0; p < m; ++p) {
            sv += vs[size_t(p)];
            sy += ys[size_t(p)];
            svv += std::norm(vs[size_t(p)]);
            svy += std::conj(vs[size_t(p)]) * ys[size_t(p)];
        }
        cplx det = double(m) * svv - std::conj(sv) * sv;
        if (std::abs(det) < 1e-12) continue;
        cplx c1 = (double(m) * svy - std::conj(sv) * sy) / det;
        cplx c0 = (sy - c1 * sv) / double(m);
        for (int p = 0; p < m; ++p)
            fit = std::max(fit, std::abs(ys[size_t(p)] - (c0 + c1 * vs[size_t(p)])));
    }
    rep.fit_residual = fit;
    rep.affine = fit < tol;
    return rep;
}

} // namespace slicetw
