#include "slicetw/slice_function.hpp"

#include <cmath>
#include <ostream>

namespace slicetw {

std::ostream& operator<<(std::ostream& os, const Quaternion& q) {
    return os << '(' << q.q0 << ", " << q.q1 << ", " << q.q2 << ", " << q.q3 << ')';
}

namespace {

constexpr double kRealMargin = 1e-12;

Quaternion pair_value(cplx a, cplx b) { return Quaternion::from_pair(a, b); }

} // namespace

nlohmann::ordered_json Region::to_json() const {
    nlohmann::ordered_json j;
    j["re"] = {re0, re1};
    j["im"] = {im0, im1};
    return j;
}

Region Region::from_json(const nlohmann::json& j) {
    Region r;
    if (j.contains("re")) {
        r.re0 = j["re"].at(0).get<double>();
        r.re1 = j["re"].at(1).get<double>();
    }
    if (j.contains("im")) {
        r.im0 = j["im"].at(0).get<double>();
        r.im1 = j["im"].at(1).get<double>();
    }
    if (r.im0 <= 0) fail(Err::InvalidArgument, "domain must stay in the open upper half plane");
    return r;
}

SliceSlot::SliceSlot(HoloMap m) : tree_(std::move(m)) {
    const HoloMap& t = *tree_;
    fn_ = [t](cplx v) { return t.eval(v); };
}

SliceSlot::SliceSlot(std::function<cplx(cplx)> fn) : fn_(std::move(fn)) {}

const HoloMap& SliceSlot::tree() const {
    if (!tree_) fail(Err::InvalidArgument, "slot is not expression-built");
    return *tree_;
}

SliceSlot SliceSlot::derivative() const {
    if (tree_) return SliceSlot(tree_->derivative());
    // Wirtinger d/dz; the slots of a slice function that is not regular are
    // not holomorphic, so both coordinate directions are needed
    auto f = fn_;
    return SliceSlot([f](cplx v) {
        cplx da = (f(v + kFdStep) - f(v - kFdStep)) / (2 * kFdStep);
        cplx db = (f(v + cplx(0, kFdStep)) - f(v - cplx(0, kFdStep))) / (2 * kFdStep);
        return 0.5 * (da - cplx(0, 1) * db);
    });
}

SliceFunction::SliceFunction(SliceSlot g, SliceSlot ghat, SliceSlot h, SliceSlot hhat, Region domain)
    : g_(std::move(g)), ghat_(std::move(ghat)), h_(std::move(h)), hhat_(std::move(hhat)),
      domain_(domain) {}

SliceFunction SliceFunction::identity() {
    HoloMap v = HoloMap::var(), zero = HoloMap::constant(0.0);
    return {v, v, zero, zero};
}

SliceFunction SliceFunction::constant(Quaternion q) {
    return {HoloMap::constant(q.c1()), HoloMap::constant(std::conj(q.c1())),
            HoloMap::constant(q.c2()), HoloMap::constant(std::conj(q.c2()))};
}

SliceFunction SliceFunction::affine(Quaternion a, Quaternion b) {
    // x * a + b: on C_i+, v |-> v a1 + b1 + (v a2 + b2) j; the opposite
    // semislice picks up the conjugated variable.
    HoloMap v = HoloMap::var();
    HoloMap g = v * HoloMap::constant(a.c1()) + HoloMap::constant(b.c1());
    HoloMap h = v * HoloMap::constant(a.c2()) + HoloMap::constant(b.c2());
    HoloMap gh = v * HoloMap::constant(std::conj(a.c1())) + HoloMap::constant(std::conj(b.c1()));
    HoloMap hh = v * HoloMap::constant(std::conj(a.c2())) + HoloMap::constant(std::conj(b.c2()));
    return {g, gh, h, hh};
}

bool SliceFunction::expression_built() const {
    return g_.has_tree() && ghat_.has_tree() && h_.has_tree() && hhat_.has_tree();
}

Quaternion SliceFunction::on_plus(cplx v) const { return pair_value(g_(v), h_(v)); }

Quaternion SliceFunction::on_minus(cplx v) const {
    return pair_value(std::conj(ghat_(v)), std::conj(hhat_(v)));
}

Quaternion SliceFunction::eval(Quaternion x) const {
    SliceCoords sc = decompose(x, kRealMargin);
    cplx v(sc.alpha, sc.beta);
    if (zero_normal_guard_ && zero_normal_guard_(v) < 1e-13)
        fail(Err::ZeroNormal, "point lies on the zero set of the normal function");
    Quaternion I = sc.I.as_quaternion();
    Quaternion one = Quaternion::real(1.0);
    Quaternion Ii = I * Quaternion::unit_i();
    Quaternion plus = on_plus(v), minus = on_minus(v);
    return ((one - Ii) * plus + (one + Ii) * minus) * 0.5;
}

Quaternion SliceFunction::eval_repr(Quaternion x, ImaginaryUnit J, ImaginaryUnit K) const {
    Quaternion dJK = J.as_quaternion() - K.as_quaternion();
    if (dJK.norm() < 1e-12) fail(Err::DegenerateUnits, "representation formula needs J != K");
    SliceCoords sc = decompose(x, kRealMargin);
    Quaternion I = sc.I.as_quaternion();
    Quaternion fJ = eval(Quaternion{sc.alpha, 0, 0, 0} + J.as_quaternion() * sc.beta);
    Quaternion fK = eval(Quaternion{sc.alpha, 0, 0, 0} + K.as_quaternion() * sc.beta);
    Quaternion inv = dJK.inverse();
    return (I - K.as_quaternion()) * inv * fJ - (I - J.as_quaternion()) * inv * fK;
}

SliceFunction SliceFunction::derivative() const {
    return {g_.derivative(), ghat_.derivative(), h_.derivative(), hhat_.derivative(), domain_};
}

Quaternion SliceFunction::spherical_derivative(Quaternion x) const {
    SliceCoords sc = decompose(x, kRealMargin);
    Quaternion imx = x.im();
    return imx.inverse() * (eval(x) - eval(sc.conj_point())) * 0.5;
}

SliceFunction SliceFunction::spherical_derivative_fn() const {
    StemPair F = to_stem(*this);
    auto F2 = F.F2;
    StemPair D;
    D.F1 = [F2](cplx z) { return F2(z) / z.imag(); };
    D.F2 = [](cplx) { return Quaternion{}; };
    return from_stem(D, domain_, 1, 0); // parity holds by construction
}

SliceFunction SliceFunction::conjugate() const {
    // quadruple of f^c is (ghat, g, -h, -hhat)
    auto neg_slot = [](const SliceSlot& s) {
        if (s.has_tree()) return SliceSlot(-s.tree());
        return SliceSlot([s](cplx v) { return -s(v); });
    };
    return {ghat_, g_, neg_slot(h_), neg_slot(hhat_), domain_};
}

SliceFunction SliceFunction::normal() const { return slice_product(conjugate(), *this); }

SliceFunction SliceFunction::reciprocal() const {
    SliceFunction n = normal();
    // N(f) is slice preserving: its quadruple is (n, n, 0, 0); the
    // reciprocal divides the conjugate's quadruple by that complex map.
    SliceFunction fc = conjugate();
    auto divide = [](const SliceSlot& a, const SliceSlot& b) {
        if (a.has_tree() && b.has_tree()) return SliceSlot(a.tree() / b.tree());
        return SliceSlot([a, b](cplx v) { return a(v) / b(v); });
    };
    SliceFunction out{divide(fc.g(), n.g()), divide(fc.ghat(), n.ghat()), divide(fc.h(), n.g()),
                      divide(fc.hhat(), n.ghat()), domain_};
    SliceSlot ng = n.g();
    out.zero_normal_guard_ = [ng](cplx v) { return std::abs(ng(v)); };
    return out;
}

SliceFunction slice_product(const SliceFunction& f, const SliceFunction& k) {
    Region common = f.domain().intersect(k.domain());
    if (common.empty())
        fail(Err::DomainMismatch, "slice product of functions on disjoint domains");
    auto combine = [](const SliceSlot& a, const SliceSlot& b, const SliceSlot& c,
                      const SliceSlot& d, int sign) {
        // a*b + sign * c*d
        if (a.has_tree() && b.has_tree() && c.has_tree() && d.has_tree()) {
            HoloMap prod = a.tree() * b.tree();
            HoloMap cross = c.tree() * d.tree();
            return SliceSlot(sign > 0 ? prod + cross : prod - cross);
        }
        return SliceSlot([a, b, c, d, sign](cplx v) {
            return a(v) * b(v) + double(sign) * (c(v) * d(v));
        });
    };
    return {combine(f.g(), k.g(), f.h(), k.hhat(), -1),
            combine(f.ghat(), k.ghat(), f.hhat(), k.h(), -1),
            combine(f.g(), k.h(), f.h(), k.ghat(), +1),
            combine(f.ghat(), k.hhat(), f.hhat(), k.g(), +1), common};
}

nlohmann::ordered_json SliceFunction::to_json() const {
    if (!expression_built())
        fail(Err::InvalidArgument, "only expression-built functions serialize to JSON");
    nlohmann::ordered_json j;
    j["g"] = g_.tree().str();
    j["ghat"] = ghat_.tree().str();
    j["h"] = h_.tree().str();
    j["hhat"] = hhat_.tree().str();
    j["domain"] = domain_.to_json();
    return j;
}

SliceFunction SliceFunction::from_json(const nlohmann::json& j) {
    auto slot = [&](const char* name) -> HoloMap {
        if (!j.contains(name)) return HoloMap::constant(0.0);
        const auto& e = j.at(name);
        if (e.is_string()) return HoloMap::parse(e.get<std::string>());
        return HoloMap::from_json(e);
    };
    Region dom;
    if (j.contains("domain")) dom = Region::from_json(j.at("domain"));
    return {slot("g"), slot("ghat"), slot("h"), slot("hhat"), dom};
}

StemPair to_stem(const SliceFunction& f) {
    auto plus = [f](cplx v) { return f.on_plus(v); };
    auto minus = [f](cplx v) { return f.on_minus(v); };
    auto value_at = [plus, minus](cplx z, bool first) {
        // F1(z) = (f_i(z) + f_{-i}(z))/2, F2(z) = -i (f_i(z) - f_{-i}(z))/2,
        // extended to Im z < 0 by the stem parity.
        bool lower = z.imag() < 0;
        cplx v = lower ? std::conj(z) : z;
        Quaternion a = plus(v), b = minus(v);
        Quaternion F1 = (a + b) * 0.5;
        Quaternion F2 = Quaternion::unit_i() * (a - b) * (-0.5);
        if (first) return F1;
        return lower ? -F2 : F2;
    };
    StemPair F;
    F.F1 = [value_at](cplx z) { return value_at(z, true); };
    F.F2 = [value_at](cplx z) { return value_at(z, false); };
    return F;
}

StemPair stem_from_channels(const std::array<HoloMap, 4>& f1, const std::array<HoloMap, 4>& f2) {
    StemPair F;
    F.F1 = [f1](cplx z) {
        return Quaternion{f1[0].eval(z).real(), f1[1].eval(z).real(), f1[2].eval(z).real(),
                          f1[3].eval(z).real()};
    };
    F.F2 = [f2](cplx z) {
        return Quaternion{f2[0].eval(z).real(), f2[1].eval(z).real(), f2[2].eval(z).real(),
                          f2[3].eval(z).real()};
    };
    return F;
}

SliceFunction from_stem(const StemPair& F, Region domain, unsigned long long seed, int samples,
                        double tol) {
    Rng rng(seed);
    double worst = 0;
    for (int s = 0; s < samples; ++s) {
        cplx z = domain.sample(rng);
        worst = std::max(worst, dist(F.F1(z), F.F1(std::conj(z))));
        worst = std::max(worst, dist(F.F2(z), -F.F2(std::conj(z))));
    }
    if (worst > tol)
        fail(Err::NotAStem, "stem parity residual " + std::to_string(worst) + " exceeds tolerance");
    auto F1 = F.F1, F2 = F.F2;
    auto g = [F1, F2](cplx v) { return (F1(v) + Quaternion::unit_i() * F2(v)).c1(); };
    auto h = [F1, F2](cplx v) { return (F1(v) + Quaternion::unit_i() * F2(v)).c2(); };
    auto gh = [F1, F2](cplx v) {
        return std::conj((F1(v) - Quaternion::unit_i() * F2(v)).c1());
    };
    auto hh = [F1, F2](cplx v) {
        return std::conj((F1(v) - Quaternion::unit_i() * F2(v)).c2());
    };
    return {SliceSlot(g), SliceSlot(gh), SliceSlot(h), SliceSlot(hh), domain};
}

SlicenessReport check_sliceness(const std::function<Quaternion(Quaternion)>& f, ImaginaryUnit J,
                                ImaginaryUnit K, unsigned long long seed, int samples, double tol) {
    Quaternion dJK = J.as_quaternion() - K.as_quaternion();
    if (dJK.norm() < 1e-12) fail(Err::DegenerateUnits, "sliceness check needs J != K");
    Quaternion inv = dJK.inverse();
    // third directions, away from J and K, at which the reconstruction is probed
    Quaternion cross = J.as_quaternion() * K.as_quaternion();
    std::array<ImaginaryUnit, 2> probes{};
    int nprobes = 0;
    Quaternion c_im = cross.im();
    if (c_im.norm() > 1e-9) {
        double n = c_im.norm();
        probes[nprobes++] = ImaginaryUnit{c_im.q1 / n, c_im.q2 / n, c_im.q3 / n};
    }
    Quaternion mid = J.as_quaternion() + K.as_quaternion();
    if (mid.norm() > 1e-9) {
        double n = mid.norm();
        probes[nprobes++] = ImaginaryUnit{mid.q1 / n, mid.q2 / n, mid.q3 / n};
    }

    Rng rng(seed);
    double worst = 0;
    for (int s = 0; s < samples; ++s) {
        double alpha = uniform(rng, -2.0, 2.0);
        double beta = uniform(rng, 0.1, 2.0);
        auto at = [&](ImaginaryUnit I, double b) {
            return f(Quaternion{alpha, 0, 0, 0} + I.as_quaternion() * b);
        };
        Quaternion F2p = inv * (at(J, beta) - at(K, beta));
        Quaternion F1p = at(J, beta) - J.as_quaternion() * F2p;
        Quaternion F2m = inv * (at(J, -beta) - at(K, -beta));
        Quaternion F1m = at(J, -beta) - J.as_quaternion() * F2m;
        worst = std::max(worst, (F2p + F2m).norm());
        worst = std::max(worst, (F1p - F1m).norm());
        for (int p = 0; p < nprobes; ++p) {
            Quaternion predicted = F1p + probes[p].as_quaternion() * F2p;
            worst = std::max(worst, dist(predicted, at(probes[p], beta)));
        }
    }
    return {worst <= tol, worst};
}

ConstantAffineReport classify_constant_affine(const SliceFunction& f, unsigned long long seed,
                                              int samples, double tol) {
    Rng rng(seed);
    SliceFunction d1 = f.derivative();
    SliceFunction d2 = d1.derivative();
    double r1 = 0, r2 = 0;
    for (int s = 0; s < samples; ++s) {
        Quaternion x = sample_quaternion(rng, 1.5, 0.2);
        r1 = std::max(r1, d1.eval(x).norm());
        r2 = std::max(r2, d2.eval(x).norm());
    }
    ConstantAffineReport rep;
    // coefficient extraction points on the two distinguished semislices
    Quaternion xp{0.3, 1.0, 0, 0}, xm{0.3, -1.0, 0, 0};
    auto coeff_tol = tol * 10;
    if (r1 <= tol) {
        rep.q1_plus = rep.q1_minus = Quaternion{};
        rep.q0_minus = f.eval(xp) * 0.5;
        rep.q0_plus = f.eval(xm) * 0.5;
        bool constant = dist(rep.q0_plus, rep.q0_minus) <= coeff_tol;
        rep.kind = constant ? FunctionClass::Constant : FunctionClass::SliceConstant;
        rep.extends_to_r = constant;
        return rep;
    }
    if (r2 <= tol) {
        rep.kind = FunctionClass::SliceAffine;
        rep.q1_minus = d1.eval(xp);
        rep.q1_plus = d1.eval(xm);
        // slice-constant remainder c = f - x * df/dx, evaluated pointwise
        auto remainder = [&](Quaternion x) { return f.eval(x) - x * d1.eval(x); };
        rep.q0_minus = remainder(xp) * 0.5;
        rep.q0_plus = remainder(xm) * 0.5;
        rep.extends_to_r = dist(rep.q1_plus, rep.q1_minus) <= coeff_tol &&
                           dist(rep.q0_plus, rep.q0_minus) <= coeff_tol;
        return rep;
    }
    rep.kind = FunctionClass::Neither;
    return rep;
}

bool is_real_slice(const SliceFunction& f, unsigned long long seed, int samples, double tol) {
    Rng rng(seed);
    for (int s = 0; s < samples; ++s) {
        ImaginaryUnit Ju = sample_unit(rng);
        Quaternion J = Ju.as_quaternion();
        double alpha = uniform(rng, -1.5, 1.5), beta = uniform(rng, 0.1, 1.5);
        Quaternion x = Quaternion{alpha, 0, 0, 0} + J * beta;
        Quaternion y = f.eval(x);
        // inside C_J: y = y0 + J * t for real t
        Quaternion tangent = y - Quaternion::real(y.q0) - J * y.im().dot(J);
        if (tangent.norm() > tol) return false;
        Quaternion xc = decompose(x).conj_point();
        if (dist(f.eval(x), f.eval(xc).conj()) > tol) return false;
    }
    return true;
}

bool extends_to_r(const SliceFunction& f, unsigned long long seed, int samples, double tol) {
    Rng rng(seed);
    const Region& dom = f.domain();
    for (int s = 0; s < samples; ++s) {
        double alpha = uniform(rng, dom.re0, dom.re1);
        double eps = uniform(rng, dom.im0, std::min(dom.im1, dom.im0 * 4));
        cplx v(alpha, eps);
        // reflection identities ghat = conj(g(conj v)), hhat = conj(h(conj v))
        if (std::abs(f.ghat()(v) - std::conj(f.g()(std::conj(v)))) > tol) return false;
        if (std::abs(f.hhat()(v) - std::conj(f.h()(std::conj(v)))) > tol) return false;
    }
    return true;
}

double check_regular(const StemPair& F, Region domain, unsigned long long seed, int samples,
                     double step) {
    Rng rng(seed);
    double worst = 0;
    for (int s = 0; s < samples; ++s) {
        cplx z = domain.sample(rng);
        Quaternion dF1_da = (F.F1(z + step) - F.F1(z - step)) / (2 * step);
        Quaternion dF1_db = (F.F1(z + cplx(0, step)) - F.F1(z - cplx(0, step))) / (2 * step);
        Quaternion dF2_da = (F.F2(z + step) - F.F2(z - step)) / (2 * step);
        Quaternion dF2_db = (F.F2(z + cplx(0, step)) - F.F2(z - cplx(0, step))) / (2 * step);
        worst = std::max(worst, (dF1_da - dF2_db).norm());
        worst = std::max(worst, (dF2_da + dF1_db).norm());
    }
    return worst;
}

double check_regular(const SliceFunction& f, unsigned long long seed, int samples) {
    return check_regular(to_stem(f), f.domain(), seed, samples);
}

} // namespace slicetw
