#include "slicetw/surfaces.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <future>
#include <numeric>
#include <sstream>
#include <thread>

namespace slicetw {

namespace {

std::vector<double> binom_row(int n) {
    std::vector<double> row(size_t(n) + 1, 1.0);
    for (int k = 1; k <= n; ++k) row[size_t(k)] = row[size_t(k) - 1] * double(n - k + 1) / double(k);
    return row;
}

/// coefficients of (a + b w)^e as a dense vector in w
std::vector<cplx> affine_power(cplx a, cplx b, int e) {
    auto row = binom_row(e);
    std::vector<cplx> out(size_t(e) + 1);
    std::vector<cplx> apow(size_t(e) + 1), bpow(size_t(e) + 1);
    apow[0] = bpow[0] = 1.0;
    for (int k = 1; k <= e; ++k) {
        apow[size_t(k)] = apow[size_t(k) - 1] * a;
        bpow[size_t(k)] = bpow[size_t(k) - 1] * b;
    }
    for (int k = 0; k <= e; ++k)
        out[size_t(k)] = row[size_t(k)] * apow[size_t(e - k)] * bpow[size_t(k)];
    return out;
}

void poly_mul_acc(std::vector<cplx>& acc, const std::vector<cplx>& factor) {
    std::vector<cplx> out(acc.size() + factor.size() - 1, 0.0);
    for (size_t i = 0; i < acc.size(); ++i)
        for (size_t j = 0; j < factor.size(); ++j) out[i + j] += acc[i] * factor[j];
    acc = std::move(out);
}

/// Coefficients in w of P(a0 + b0 w, ..., a3 + b3 w), plus a per-index
/// magnitude bound assembled from absolute values, for zero tests.
struct RestrictResult {
    std::vector<cplx> coef;
    std::vector<double> mag;
};

RestrictResult restrict_affine(const HomoPoly& P, const std::array<cplx, 4>& a,
                               const std::array<cplx, 4>& b) {
    RestrictResult r;
    r.coef.assign(size_t(P.degree) + 1, 0.0);
    r.mag.assign(size_t(P.degree) + 1, 0.0);
    for (const auto& t : P.terms) {
        std::vector<cplx> poly{t.coef};
        std::vector<cplx> apoly{std::abs(t.coef)};
        for (int k = 0; k < 4; ++k) {
            if (t.e[size_t(k)] == 0) continue;
            poly_mul_acc(poly, affine_power(a[size_t(k)], b[size_t(k)], t.e[size_t(k)]));
            poly_mul_acc(apoly, affine_power(std::abs(a[size_t(k)]), std::abs(b[size_t(k)]),
                                             t.e[size_t(k)]));
        }
        for (size_t i = 0; i < poly.size(); ++i) {
            r.coef[i] += poly[i];
            r.mag[i] += std::abs(apoly[i]);
        }
    }
    return r;
}

// --- exact rational cross-check ------------------------------------------------

using i128 = __int128;

i128 gcd128(i128 a, i128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b) {
        i128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

struct Rat {
    i128 num = 0, den = 1;

    void reduce() {
        if (den < 0) {
            num = -num;
            den = -den;
        }
        i128 g = gcd128(num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }
    static Rat of(i128 n, i128 d) {
        Rat r{n, d};
        r.reduce();
        return r;
    }
    bool zero() const { return num == 0; }
    Rat operator+(const Rat& o) const { return of(num * o.den + o.num * den, den * o.den); }
    Rat operator-(const Rat& o) const { return of(num * o.den - o.num * den, den * o.den); }
    Rat operator*(const Rat& o) const { return of(num * o.num, den * o.den); }
    Rat operator/(const Rat& o) const {
        if (o.num == 0) fail(Err::Pole, "rational division by zero");
        return of(num * o.den, den * o.num);
    }
    Rat operator-() const { return {-num, den}; }
};

struct RatC {
    Rat re, im;

    bool zero() const { return re.zero() && im.zero(); }
    RatC operator+(const RatC& o) const { return {re + o.re, im + o.im}; }
    RatC operator-(const RatC& o) const { return {re - o.re, im - o.im}; }
    RatC operator*(const RatC& o) const {
        return {re * o.re - im * o.im, re * o.im + im * o.re};
    }
    RatC operator/(const RatC& o) const {
        Rat n = o.re * o.re + o.im * o.im;
        if (n.zero()) fail(Err::Pole, "rational division by zero");
        RatC conj{o.re, -o.im};
        RatC prod = *this * conj;
        return {prod.re / n, prod.im / n};
    }
    RatC operator-() const { return {-re, -im}; }
};

bool rat_of_double(double x, Rat& out) {
    double scaled = x * 1048576.0;
    if (!std::isfinite(scaled) || scaled != std::floor(scaled) || std::abs(scaled) >= 9.0e15)
        return false;
    out = Rat::of(i128(static_cast<long long>(scaled)), i128(1048576));
    return true;
}

bool ratc_of_cplx(cplx z, RatC& out) {
    return rat_of_double(z.real(), out.re) && rat_of_double(z.imag(), out.im);
}

// rational evaluation of an expression string re-parsed per node is avoided:
// we walk the double tree via its JSON form, which preserves exact constants
bool eval_rational(const nlohmann::json& j, const RatC& v, RatC& out) {
    const std::string tag = j.at(0).get<std::string>();
    auto rec = [&](size_t k, RatC& r) { return eval_rational(j.at(k), v, r); };
    if (tag == "const")
        return ratc_of_cplx({j.at(1).at(0).get<double>(), j.at(1).at(1).get<double>()}, out);
    if (tag == "var") {
        out = v;
        return true;
    }
    RatC a, b;
    if (tag == "add") { if (!rec(1, a) || !rec(2, b)) return false; out = a + b; return true; }
    if (tag == "sub") { if (!rec(1, a) || !rec(2, b)) return false; out = a - b; return true; }
    if (tag == "mul") { if (!rec(1, a) || !rec(2, b)) return false; out = a * b; return true; }
    if (tag == "div") { if (!rec(1, a) || !rec(2, b)) return false; out = a / b; return true; }
    if (tag == "neg") { if (!rec(1, a)) return false; out = -a; return true; }
    if (tag == "pow") {
        if (!rec(1, a)) return false;
        int e = j.at(2).get<int>();
        bool invert = e < 0;
        e = std::abs(e);
        RatC acc{Rat{1, 1}, Rat{0, 1}};
        for (int k = 0; k < e; ++k) acc = acc * a;
        out = invert ? RatC{Rat{1, 1}, Rat{0, 1}} / acc : acc;
        return true;
    }
    return false; // sqrt, exp
}

/// exact containment check at one rational point; returns false when the
/// computation leaves the rational world
bool exact_contained_at(const HomoPoly& P, const SliceFunction& f, const RatC& v, bool& contained) {
    RatC g, gh, h, hh;
    if (!eval_rational(f.g().tree().to_json(), v, g)) return false;
    if (!eval_rational(f.ghat().tree().to_json(), v, gh)) return false;
    if (!eval_rational(f.h().tree().to_json(), v, h)) return false;
    if (!eval_rational(f.hhat().tree().to_json(), v, hh)) return false;
    RatC one{Rat{1, 1}, Rat{0, 1}}, zero{Rat{0, 1}, Rat{0, 1}};
    std::array<RatC, 4> a{one, zero, g, h};
    std::array<RatC, 4> b{zero, one, -hh, gh};
    std::vector<RatC> acc(size_t(P.degree) + 1, zero);
    for (const auto& t : P.terms) {
        RatC c;
        if (!ratc_of_cplx(t.coef, c)) return false;
        std::vector<RatC> poly{c};
        for (int k = 0; k < 4; ++k) {
            for (int rep = 0; rep < t.e[size_t(k)]; ++rep) {
                std::vector<RatC> out(poly.size() + 1, zero);
                for (size_t i = 0; i < poly.size(); ++i) {
                    out[i] = out[i] + poly[i] * a[size_t(k)];
                    out[i + 1] = out[i + 1] + poly[i] * b[size_t(k)];
                }
                poly = std::move(out);
            }
        }
        for (size_t i = 0; i < poly.size(); ++i) acc[i] = acc[i] + poly[i];
    }
    contained = std::all_of(acc.begin(), acc.end(), [](const RatC& c) { return c.zero(); });
    return true;
}

// --- polynomial roots ----------------------------------------------------------

/// Durand-Kerner iteration; adequate for the catalog degrees and low orders.
std::vector<cplx> poly_roots(std::vector<cplx> c) {
    while (!c.empty() && c.back() == 0.0) c.pop_back();
    int m = int(c.size()) - 1;
    if (m <= 0) return {};
    for (auto& x : c) x /= c.back();
    double radius = 1.0;
    for (int k = 0; k < m; ++k) radius = std::max(radius, std::abs(c[size_t(k)]));
    radius = 1.0 + radius;
    std::vector<cplx> w;
    w.resize(size_t(m));
    for (int k = 0; k < m; ++k)
        w[size_t(k)] = std::polar(radius, 2.0 * M_PI * (double(k) + 0.35) / double(m));
    auto eval = [&](cplx z) {
        cplx acc = 0;
        for (int k = m; k >= 0; --k) acc = acc * z + c[size_t(k)];
        return acc;
    };
    for (int iter = 0; iter < 400; ++iter) {
        double moved = 0;
        for (int k = 0; k < m; ++k) {
            cplx denom = 1.0;
            for (int l = 0; l < m; ++l)
                if (l != k) denom *= w[size_t(k)] - w[size_t(l)];
            if (denom == 0.0) denom = 1e-30;
            cplx step = eval(w[size_t(k)]) / denom;
            w[size_t(k)] -= step;
            moved = std::max(moved, std::abs(step));
        }
        if (moved < 1e-14 * radius) break;
    }
    return w;
}

constexpr double kClusterRadius = 1e-6;

std::vector<int> cluster_sizes(const std::vector<cplx>& roots) {
    std::vector<int> owner(roots.size());
    std::iota(owner.begin(), owner.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (owner[size_t(x)] != x) x = owner[size_t(x)] = owner[size_t(owner[size_t(x)])];
        return x;
    };
    for (size_t i = 0; i < roots.size(); ++i)
        for (size_t j = i + 1; j < roots.size(); ++j)
            if (std::abs(roots[i] - roots[j]) <= kClusterRadius * std::max(1.0, std::abs(roots[i])))
                owner[size_t(find(int(i)))] = find(int(j));
    std::vector<int> sizes;
    for (size_t i = 0; i < roots.size(); ++i) {
        if (find(int(i)) == int(i)) {
            int n = 0;
            for (size_t j = 0; j < roots.size(); ++j)
                if (find(int(j)) == int(i)) ++n;
            sizes.push_back(n);
        }
    }
    std::sort(sizes.rbegin(), sizes.rend());
    return sizes;
}

int thread_budget() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("SLICE_TWISTOR_THREADS")) {
        long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1) hw = std::min<unsigned>(hw, unsigned(cap));
    }
    return int(hw);
}

} // namespace

HomoPoly HomoPoly::make(int degree, std::vector<Term> terms) {
    HomoPoly p{degree, std::move(terms)};
    bool nonzero = false;
    for (const auto& t : p.terms) {
        int total = t.e[0] + t.e[1] + t.e[2] + t.e[3];
        if (total != degree || t.e[0] < 0 || t.e[1] < 0 || t.e[2] < 0 || t.e[3] < 0)
            fail(Err::InvalidArgument, "monomial degree does not match the declared degree");
        if (t.coef != 0.0) nonzero = true;
    }
    if (!nonzero) fail(Err::InvalidArgument, "polynomial has no nonzero coefficient");
    return p;
}

cplx HomoPoly::eval(const std::array<cplx, 4>& X) const {
    cplx acc = 0;
    for (const auto& t : terms) {
        cplx m = t.coef;
        for (int k = 0; k < 4; ++k)
            for (int r = 0; r < t.e[size_t(k)]; ++r) m *= X[size_t(k)];
        acc += m;
    }
    return acc;
}

nlohmann::ordered_json HomoPoly::to_json() const {
    nlohmann::ordered_json j;
    j["degree"] = degree;
    j["terms"] = nlohmann::ordered_json::array();
    for (const auto& t : terms) {
        nlohmann::ordered_json tj;
        tj["exp"] = {t.e[0], t.e[1], t.e[2], t.e[3]};
        tj["coef"] = {t.coef.real(), t.coef.imag()};
        j["terms"].push_back(tj);
    }
    return j;
}

HomoPoly HomoPoly::from_json(const nlohmann::json& j) {
    std::vector<Term> terms;
    for (const auto& tj : j.at("terms")) {
        Term t;
        for (int k = 0; k < 4; ++k) t.e[size_t(k)] = tj.at("exp").at(size_t(k)).get<int>();
        t.coef = {tj.at("coef").at(0).get<double>(), tj.at("coef").at(1).get<double>()};
        terms.push_back(t);
    }
    return make(j.at("degree").get<int>(), std::move(terms));
}

HomoPoly quadric_q() {
    return HomoPoly::make(2, {{{1, 0, 0, 1}, 1.0}, {{0, 1, 1, 0}, -1.0}});
}

HomoPoly quaddiag(double lambda, double mu, double nu) {
    cplx inu(0, nu);
    return HomoPoly::make(2, {{{2, 0, 0, 0}, std::exp(lambda + inu)},
                              {{0, 2, 0, 0}, std::exp(-lambda + inu)},
                              {{0, 0, 2, 0}, std::exp(mu - inu)},
                              {{0, 0, 0, 2}, std::exp(-mu - inu)}});
}

HomoPoly quadnondiag(double k) {
    cplx i(0, 1);
    return HomoPoly::make(2, {{{2, 0, 0, 0}, i},
                              {{0, 2, 0, 0}, i},
                              {{0, 1, 0, 1}, k},
                              {{1, 0, 1, 0}, -k},
                              {{0, 1, 1, 0}, 1.0},
                              {{1, 0, 0, 1}, -1.0}});
}

HomoPoly plane(cplx c0, cplx c1, cplx c2, cplx c3) {
    return HomoPoly::make(
        1, {{{1, 0, 0, 0}, c0}, {{0, 1, 0, 0}, c1}, {{0, 0, 1, 0}, c2}, {{0, 0, 0, 1}, c3}});
}

HomoPoly plane_pair() { return HomoPoly::make(2, {{{2, 0, 0, 0}, 1.0}, {{0, 0, 2, 0}, -1.0}}); }

HomoPoly quadric_cone() { return HomoPoly::make(2, {{{0, 2, 0, 0}, 1.0}, {{0, 0, 1, 1}, -1.0}}); }

HomoPoly cubic_nonnormal1() {
    return HomoPoly::make(3, {{{1, 0, 0, 2}, 1.0}, {{0, 2, 1, 0}, 1.0}});
}

HomoPoly cubic_nonnormal2() {
    return HomoPoly::make(3, {{{1, 1, 0, 1}, 1.0}, {{0, 0, 1, 2}, 1.0}, {{0, 3, 0, 0}, 1.0}});
}

HomoPoly cubic_cone(cplx c) {
    return HomoPoly::make(3, {{{0, 0, 0, 3}, 1.0},
                              {{0, 1, 0, 2}, -(c + 1.0)},
                              {{0, 2, 0, 1}, c},
                              {{0, 1, 2, 0}, -1.0}});
}

HomoPoly quartic_scroll() {
    return HomoPoly::make(4, {{{0, 2, 2, 0}, 1.0},
                              {{1, 1, 1, 1}, -2.0},
                              {{2, 0, 0, 2}, 1.0},
                              {{1, 2, 1, 0}, 2.0},
                              {{2, 1, 0, 1}, 2.0}});
}

HomoPoly catalog(const std::string& name, const std::vector<double>& params) {
    auto need = [&](size_t n) {
        if (params.size() != n)
            fail(Err::InvalidArgument, "catalog surface '" + name + "' expects " +
                                           std::to_string(n) + " parameter(s)");
    };
    if (name == "quadric_q") { need(0); return quadric_q(); }
    if (name == "quaddiag") { need(3); return quaddiag(params[0], params[1], params[2]); }
    if (name == "quadnondiag") { need(1); return quadnondiag(params[0]); }
    if (name == "plane") {
        need(8);
        return plane({params[0], params[1]}, {params[2], params[3]}, {params[4], params[5]},
                     {params[6], params[7]});
    }
    if (name == "plane_pair") { need(0); return plane_pair(); }
    if (name == "quadric_cone") { need(0); return quadric_cone(); }
    if (name == "cubic_nonnormal1") { need(0); return cubic_nonnormal1(); }
    if (name == "cubic_nonnormal2") { need(0); return cubic_nonnormal2(); }
    if (name == "cubic_cone") { need(2); return cubic_cone({params[0], params[1]}); }
    if (name == "quartic_scroll") { need(0); return quartic_scroll(); }
    fail(Err::InvalidArgument, "unknown catalog surface '" + name + "'");
}

ContainsReport contains_lift(const HomoPoly& P, const SliceFunction& f, int samples,
                             unsigned long long seed, double tol, double branch_margin) {
    if (!f.expression_built())
        fail(Err::InvalidArgument, "contains_lift requires an expression-built function");
    Rng rng(seed);
    ContainsReport rep;
    const Region& dom = f.domain();
    auto margin_ok = [&](cplx v) {
        const SliceSlot* slots[4] = {&f.g(), &f.ghat(), &f.h(), &f.hhat()};
        for (const auto* s : slots) {
            if (s->tree().cut_distance(v) < branch_margin) return false;
            if (s->tree().pole_distance(v) < branch_margin) return false;
        }
        return true;
    };
    int accepted = 0, guard = 0;
    while (accepted < samples && guard < samples * 200) {
        ++guard;
        cplx v = dom.sample(rng);
        if (!margin_ok(v)) {
            ++rep.samples_rejected;
            continue;
        }
        ++accepted;
        std::array<cplx, 4> a{1.0, 0.0, f.g()(v), f.h()(v)};
        std::array<cplx, 4> b{0.0, 1.0, -f.hhat()(v), f.ghat()(v)};
        RestrictResult r = restrict_affine(P, a, b);
        for (size_t k = 0; k < r.coef.size(); ++k)
            rep.residual = std::max(rep.residual, std::abs(r.coef[k]) / std::max(1.0, r.mag[k]));
    }
    if (accepted == 0) fail(Err::OutOfDomain, "no sample avoided the branch-cut margin");
    rep.samples_used = accepted;
    rep.contained = rep.residual < tol;

    // exact cross-check for rational data of low degree
    bool rational = P.degree <= 4 && f.g().tree().is_rational_tree() &&
                    f.ghat().tree().is_rational_tree() && f.h().tree().is_rational_tree() &&
                    f.hhat().tree().is_rational_tree();
    if (rational) {
        static const std::array<RatC, 5> points{
            RatC{Rat{1, 3}, Rat{5, 7}}, RatC{Rat{-2, 5}, Rat{3, 4}}, RatC{Rat{7, 9}, Rat{1, 2}},
            RatC{Rat{-3, 8}, Rat{4, 5}}, RatC{Rat{2, 7}, Rat{6, 5}}};
        int done = 0;
        bool all_zero = true;
        for (const auto& pt : points) {
            if (done == 3) break;
            bool contained_here = false;
            try {
                if (!exact_contained_at(P, f, pt, contained_here)) break;
            } catch (const Error&) {
                continue; // pole at this rational point, try the next
            }
            ++done;
            all_zero = all_zero && contained_here;
        }
        if (done == 3) {
            rep.exact_checked = true;
            rep.exact_zero = all_zero;
            rep.contained = rep.contained && all_zero;
        }
    }
    return rep;
}

FiberReport fiber_cardinality(const HomoPoly& P, const Quaternion& q) {
    cplx q1 = q.c1(), q2 = q.c2();
    std::array<cplx, 4> a{1.0, 0.0, q1, q2};
    std::array<cplx, 4> b{0.0, 1.0, -std::conj(q2), std::conj(q1)};
    RestrictResult r = restrict_affine(P, a, b);

    FiberReport rep;
    bool all_zero = true;
    for (size_t k = 0; k < r.coef.size(); ++k)
        if (std::abs(r.coef[k]) > 1e-12 * std::max(1.0, r.mag[k])) all_zero = false;
    if (all_zero) {
        rep.contained = true;
        return rep;
    }

    std::vector<cplx> c = r.coef;
    int inf_mult = 0;
    while (!c.empty() && std::abs(c.back()) <= 1e-12 * std::max(1.0, r.mag[c.size() - 1])) {
        c.pop_back();
        ++inf_mult;
    }
    std::vector<cplx> roots = poly_roots(c);
    std::vector<int> sizes = cluster_sizes(roots);
    if (inf_mult > 0) sizes.push_back(inf_mult);
    std::sort(sizes.rbegin(), sizes.rend());
    rep.multiplicities = sizes;
    rep.count = int(sizes.size());
    rep.tangent = !sizes.empty() && sizes.front() >= 2;
    rep.generic = rep.count == P.degree && !rep.tangent;
    return rep;
}

std::string DiscriminantReport::to_csv() const {
    std::ostringstream os;
    os << "q0,q1,q2,q3,count,flags\n";
    for (const auto& cell : cells) {
        os << cell.q.q0 << ',' << cell.q.q1 << ',' << cell.q.q2 << ',' << cell.q.q3 << ',';
        if (cell.fiber.contained)
            os << 0 << ",contained";
        else
            os << cell.fiber.count << ',' << (cell.fiber.tangent ? "tangent"
                                               : cell.fiber.generic ? "generic" : "defect");
        os << '\n';
    }
    return os.str();
}

DiscriminantReport discriminant_scan(const HomoPoly& P, const std::array<double, 8>& box,
                                     const std::array<int, 4>& resolution) {
    long long total = 1;
    for (int k = 0; k < 4; ++k) {
        if (resolution[size_t(k)] < 1) fail(Err::InvalidArgument, "resolution must be >= 1");
        total *= resolution[size_t(k)];
        if (total > 64LL * 64 * 64 * 64) fail(Err::TooLarge, "scan grid exceeds the 64^4 guard");
    }
    auto coord = [&](int axis, int idx) {
        double lo = box[size_t(2 * axis)], hi = box[size_t(2 * axis + 1)];
        int n = resolution[size_t(axis)];
        if (n == 1) return (lo + hi) / 2;
        return lo + (hi - lo) * double(idx) / double(n - 1);
    };
    DiscriminantReport rep;
    rep.cells.resize(size_t(total));
    auto run = [&](long long begin, long long end) {
        for (long long flat = begin; flat < end; ++flat) {
            long long rem = flat;
            int i3 = int(rem % resolution[3]);
            rem /= resolution[3];
            int i2 = int(rem % resolution[2]);
            rem /= resolution[2];
            int i1 = int(rem % resolution[1]);
            rem /= resolution[1];
            int i0 = int(rem);
            Quaternion q{coord(0, i0), coord(1, i1), coord(2, i2), coord(3, i3)};
            rep.cells[size_t(flat)] = {q, fiber_cardinality(P, q)};
        }
    };
    int threads = std::min<long long>(thread_budget(), total);
    if (threads <= 1) {
        run(0, total);
    } else {
        std::vector<std::future<void>> jobs;
        long long chunk = (total + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            long long b = t * chunk, e = std::min(total, b + chunk);
            if (b >= e) break;
            jobs.push_back(std::async(std::launch::async, run, b, e));
        }
        for (auto& j : jobs) j.get();
    }
    return rep;
}

SliceFunction solve_plane_splitting(cplx c0, cplx c1, cplx c2, cplx c3, const HoloMap& free1,
                                    const HoloMap& free2) {
    if (c3 != 0.0) {
        const HoloMap& g = free1;
        const HoloMap& hhat = free2;
        HoloMap h = -(HoloMap::constant(c0) + HoloMap::constant(c2) * g) / HoloMap::constant(c3);
        HoloMap ghat =
            -(HoloMap::constant(c1) - HoloMap::constant(c2) * hhat) / HoloMap::constant(c3);
        return {g, ghat, h, hhat};
    }
    if (c2 != 0.0) {
        const HoloMap& h = free1;
        const HoloMap& ghat = free2;
        HoloMap g = -(HoloMap::constant(c0) + HoloMap::constant(c3) * h) / HoloMap::constant(c2);
        HoloMap hhat =
            (HoloMap::constant(c1) + HoloMap::constant(c3) * ghat) / HoloMap::constant(c2);
        return {g, ghat, h, hhat};
    }
    fail(Err::DegeneratePlane, "plane with c2 = c3 = 0 misses the lift coordinates");
}

SliceFunction solve_quaddiag_splitting(double lambda, double mu, double nu, int sign) {
    cplx inu(0, nu);
    double kappa = double(sign) * std::exp(mu - lambda);
    HoloMap v = HoloMap::var();
    HoloMap g = v;
    HoloMap ghat = HoloMap::constant(kappa) * v;
    HoloMap rad_h = exp(HoloMap::constant(mu + inu)) *
                    (exp(HoloMap::constant(lambda + inu)) +
                     exp(HoloMap::constant(mu - inu)) * pow(v, 2));
    HoloMap rad_hh = exp(HoloMap::constant(-mu + inu)) *
                     (exp(HoloMap::constant(-lambda + inu)) +
                      exp(HoloMap::constant(-mu - inu)) * HoloMap::constant(kappa * kappa) *
                          pow(v, 2));
    HoloMap i_const = HoloMap::constant(cplx(0, 1));
    HoloMap h_base = i_const * sqrt(rad_h);
    HoloMap hh_base = i_const * sqrt(rad_hh);

    // probe the unsquared middle equation e^mu g hhat = e^-mu h ghat to fix
    // the relative sign of the two square roots
    auto middle_residual = [&](const HoloMap& h, const HoloMap& hh, cplx probe) {
        cplx lhs = std::exp(mu) * g.eval(probe) * hh.eval(probe);
        cplx rhs = std::exp(-mu) * h.eval(probe) * ghat.eval(probe);
        return std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs) + std::abs(rhs));
    };
    const std::array<cplx, 3> probes{cplx(0.37, 0.41), cplx(-0.53, 0.29), cplx(0.11, 0.73)};
    for (cplx probe : probes) {
        if (rad_h.cut_distance(probe) < 1e-6 || rad_hh.cut_distance(probe) < 1e-6) continue;
        if (middle_residual(h_base, hh_base, probe) < 1e-9)
            return {g, ghat, h_base, hh_base};
        if (middle_residual(h_base, -hh_base, probe) < 1e-9)
            return {g, ghat, h_base, -hh_base};
    }
    fail(Err::BranchInconsistent, "no square-root pairing satisfies the middle equation");
}

SliceFunction solve_cubic_cone_splitting(cplx c, const HoloMap& ghat) {
    HoloMap zero = HoloMap::constant(0.0);
    HoloMap rad = pow(ghat, 3) - HoloMap::constant(c + 1.0) * pow(ghat, 2) +
                  HoloMap::constant(c) * ghat;
    return {zero, ghat, zero, sqrt(rad)};
}

} // namespace slicetw
