#include "slicetw/suite.hpp"

#include <chrono>
#include <cmath>
#include <functional>

#include "slicetw/grass.hpp"
#include "slicetw/ocs.hpp"
#include "slicetw/surfaces.hpp"
#include "slicetw/twistor.hpp"

namespace slicetw {

namespace {

struct Battery {
    std::string name;
    SliceFunction fn;
};

SliceFunction f_zero_on_minus() {
    // x (1 - Ii)/2: identity on C_i+, zero on C_-i+
    return {HoloMap::var(), HoloMap::constant(0.0), HoloMap::constant(0.0),
            HoloMap::constant(0.0)};
}

std::vector<Battery> battery_functions() {
    HoloMap v = HoloMap::var();
    HoloMap zero = HoloMap::constant(0.0);
    return {
        {"identity", SliceFunction::identity()},
        {"x^2", {pow(v, 2), pow(v, 2), zero, zero}},
        {"x - j", {v, v, HoloMap::constant(-1.0), HoloMap::constant(-1.0)}},
        {"x(1-Ii)/2", f_zero_on_minus()},
        {"1 - Ii", {HoloMap::constant(2.0), zero, zero, zero}},
        {"cubic f1", {-pow(v, 2), v, zero, zero}},
    };
}

using Clock = std::chrono::steady_clock;

CheckResult timed(const std::string& name, double tolerance, double time_limit,
                  const std::function<double(std::string&)>& body) {
    CheckResult r;
    r.name = name;
    r.tolerance = tolerance;
    r.time_limit = time_limit;
    auto t0 = Clock::now();
    try {
        r.residual = body(r.note);
        r.pass = r.residual < tolerance;
    } catch (const std::exception& e) {
        r.residual = std::numeric_limits<double>::infinity();
        r.pass = false;
        r.note = e.what();
    }
    r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    if (r.seconds >= time_limit) {
        r.pass = false;
        if (!r.note.empty()) r.note += "; ";
        r.note += "time limit exceeded";
    }
    return r;
}

} // namespace

nlohmann::ordered_json SuiteReport::to_json(bool include_timing) const {
    nlohmann::ordered_json j;
    j["command"] = "suite";
    j["config"] = {{"seed", seed}};
    j["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : checks) {
        nlohmann::ordered_json cj;
        cj["name"] = c.name;
        cj["residual"] = c.residual;
        cj["tolerance"] = c.tolerance;
        cj["verdict"] = c.pass ? "pass" : "fail";
        if (!c.note.empty()) cj["note"] = c.note;
        if (include_timing) cj["seconds"] = c.seconds;
        j["checks"].push_back(cj);
    }
    j["all_pass"] = all_pass;
    return j;
}

SuiteReport run_acceptance_suite(unsigned long long seed) {
    SuiteReport report;
    report.seed = seed;
    SliceFunction f0 = f_zero_on_minus();
    Region window; // default sampling window in C+

    // 1. lift of x(1-Ii)/2 equals [1, u, v, 0]
    report.checks.push_back(timed("lift_identity", 1e-12, 1.0, [&](std::string&) {
        Rng rng(seed);
        double worst = 0;
        for (int s = 0; s < 1000; ++s) {
            cplx u = sample_cplx(rng), v = window.sample(rng);
            ProjPoint3 expected{{1.0, u, v, 0.0}};
            worst = std::max(worst, chordal(lift(f0, u, v), expected));
        }
        return worst;
    }));

    // 2. commuting square pi . lift = f . pi for the expression battery
    report.checks.push_back(timed("commuting_square", 1e-9, 5.0, [&](std::string&) {
        Rng rng(seed + 1);
        double worst = 0;
        for (const auto& item : battery_functions()) {
            for (int s = 0; s < 500; ++s) {
                cplx u = sample_cplx(rng), v = window.sample(rng);
                ProjPoint3 p{{1.0, u, v, u * v}};
                ProjValue base = project(p);
                ProjValue lifted = project(lift(item.fn, u, v));
                if (base.infinity || lifted.infinity) return 1.0;
                worst = std::max(worst, dist(lifted.q, item.fn.eval(base.q)));
            }
        }
        return worst;
    }));

    // 3. lift lies on X0 X3 = X1 X2 iff the function is a real slice function
    report.checks.push_back(timed("real_quadric_iff", 1e-10, 2.0, [&](std::string& note) {
        Rng rng(seed + 2);
        HoloMap v = HoloMap::var();
        SliceFunction freal{pow(v, 2) + HoloMap::constant(1.0), pow(v, 2) + HoloMap::constant(1.0),
                            HoloMap::constant(0.0), HoloMap::constant(0.0)};
        double worst = 0;
        int violations = 0;
        for (int s = 0; s < 500; ++s) {
            cplx u = sample_cplx(rng), vv = window.sample(rng);
            ProjPoint3 p = lift(freal, u, vv);
            worst = std::max(worst, std::abs(p[0] * p[3] - p[1] * p[2]));
            ProjPoint3 q = lift(f0, u, vv);
            if (std::abs(q[0] * q[3] - q[1] * q[2]) > 1e-6) ++violations;
        }
        if (violations <= 495) { // > 99% must violate
            note = "falsification side violated at only " + std::to_string(violations) + "/500";
            return 1.0;
        }
        return worst;
    }));

    // 4. catalog memberships with the stated splittings
    report.checks.push_back(timed("surface_memberships", 1e-8, 10.0, [&](std::string& note) {
        HoloMap v = HoloMap::var();
        HoloMap zero = HoloMap::constant(0.0);
        struct Case {
            std::string label;
            HomoPoly P;
            SliceFunction fn;
        };
        std::vector<Case> cases;
        cases.push_back({"plane_x3", plane(0, 0, 0, 1), f0});
        cases.push_back({"cubic1", cubic_nonnormal1(), {-pow(v, 2), v, zero, zero}});
        cases.push_back({"cubic2", cubic_nonnormal2(),
                         {HoloMap::constant(-1.0) / v, v, zero, HoloMap::constant(1.0) / pow(v, 2)}});
        cases.push_back({"cone", quadric_cone(), {zero, v, zero, HoloMap::constant(-1.0) / v}});
        for (double c : {0.0, 1.0, 2.0})
            cases.push_back({"cubic_cone_c" + std::to_string(int(c)), cubic_cone(c),
                             solve_cubic_cone_splitting(c, v)});
        double worst = 0;
        bool gates_ok = true;
        for (const auto& item : cases) {
            ContainsReport r = contains_lift(item.P, item.fn, 500, seed + 3, 1e-8);
            if (!r.contained) {
                note += item.label + " not contained; ";
                gates_ok = false;
            }
            if (r.exact_checked && !r.exact_zero) {
                note += item.label + " fails exact check; ";
                gates_ok = false;
            }
            worst = std::max(worst, r.residual);
        }
        return gates_ok ? worst : 1.0;
    }));

    // 5. quaddiag splitting solver
    report.checks.push_back(timed("quaddiag_solver", 1e-8, 5.0, [&](std::string&) {
        const double params[3][3] = {{0, 0, 0}, {0.3, 0.3, M_PI / 2}, {0.2, 0.7, 0.3}};
        double worst = 0;
        for (const auto& p : params) {
            SliceFunction f = solve_quaddiag_splitting(p[0], p[1], p[2]);
            ContainsReport r = contains_lift(quaddiag(p[0], p[1], p[2]), f, 500, seed + 4, 1e-8,
                                             1e-3);
            worst = std::max(worst, r.residual);
        }
        return worst;
    }));

    // 6. twistor transforms of the four rational-line examples
    report.checks.push_back(timed("transform_curves", 1e-10, 2.0, [&](std::string& note) {
        HoloMap v = HoloMap::var();
        HoloMap zero = HoloMap::constant(0.0);
        struct Case {
            SliceFunction fn;
            std::function<ProjPoint5(cplx)> expected;
        };
        std::vector<Case> cases;
        cases.push_back({{HoloMap::constant(2.0), zero, zero, zero},
                         [](cplx) { return ProjPoint5{{0, 0, -2, 0, 0, 1}}; }});
        cases.push_back({{zero, HoloMap::constant(2.0), zero, zero},
                         [](cplx) { return ProjPoint5{{0, 0, 0, 2, 0, 1}}; }});
        cases.push_back({f0, [](cplx w) { return ProjPoint5{{0, 0, -w, 0, 0, 1}}; }});
        cases.push_back({{zero, v, zero, zero},
                         [](cplx w) { return ProjPoint5{{0, 0, 0, w, 0, 1}}; }});
        Rng rng(seed + 5);
        double worst = 0;
        bool gates_ok = true;
        for (auto& item : cases) {
            TransformCurve curve = transform(item.fn);
            for (int s = 0; s < 64; ++s) {
                cplx w = window.sample(rng);
                ProjPoint5 got = curve.eval(w);
                ProjPoint5 want = item.expected(w);
                double direct = 0;
                for (int k = 0; k < 6; ++k) direct = std::max(direct, std::abs(got[k] - want[k]));
                if (direct > 1e-13) {
                    note = "curve is not reproduced exactly";
                    gates_ok = false;
                }
                worst = std::max(worst, direct);
                worst = std::max(worst, got.klein_residual());
                // wedge oracle: the line through two lift points, dualized
                ProjPoint5 oracle =
                    line_through(lift(item.fn, 0.0, w), lift(item.fn, 1.0, w));
                if (chordal(oracle, got) > 1e-12) {
                    note = "wedge oracle disagrees";
                    gates_ok = false;
                }
            }
        }
        return gates_ok ? worst : 1.0;
    }));

    // 7. twistor-line finder on the two classified quadric curves
    report.checks.push_back(timed("twistor_line_finder", 1e-8, 10.0, [&](std::string& note) {
        HoloMap v = HoloMap::var();
        HoloMap s = sqrt(HoloMap::constant(1.0) - pow(v, 2));
        SliceFunction two_lines{v, v, HoloMap::constant(2.0) * s, HoloMap::constant(0.5) * s};
        FinderOptions opts;
        opts.grid = 400;
        std::array<double, 4> box{-3, 3, -3, 3};
        auto hits = find_twistor_lines(transform(two_lines), box, opts);
        if (hits.size() != 2) {
            note = "expected 2 lines, found " + std::to_string(hits.size());
            return 1.0;
        }
        double worst = std::max(std::abs(hits[0].v - cplx(-1.0)), std::abs(hits[1].v - cplx(1.0)));
        worst = std::max({worst, hits[0].residual, hits[1].residual});
        SliceFunction no_lines = solve_quaddiag_splitting(0.0, 0.0, 0.5);
        auto empty = find_twistor_lines(transform(no_lines), box, opts);
        if (!empty.empty()) {
            note = "nu = 0.5 curve produced spurious lines";
            return 1.0;
        }
        return worst;
    }));

    // 8. hermitian criterion for rational-line transforms
    report.checks.push_back(timed("hermitian_criterion", 1e-10, 3.0, [&](std::string& note) {
        HoloMap v = HoloMap::var();
        HoloMap zero = HoloMap::constant(0.0);
        // (Cx + D)^{-.} (Ax + B)(1 - Ii)/2 for (A B; C D) in SL(2, R)
        const double abcd[3][4] = {{1, 0, 0, 1}, {2, 1, 1, 1}, {1, 1, 0, 1}};
        double worst = 0;
        bool gates_ok = true;
        for (const auto& m : abcd) {
            HoloMap g = (HoloMap::constant(m[0]) * v + HoloMap::constant(m[1])) /
                        (HoloMap::constant(m[2]) * v + HoloMap::constant(m[3]));
            SliceFunction member{g, zero, zero, zero};
            AffineCheckReport r = check_affine_transform(member, m[3], m[2], seed + 6);
            if (!r.affine) {
                note += "member not affine; ";
                gates_ok = false;
            }
            worst = std::max(worst, std::abs(r.hermitian_residual));
        }
        SliceFunction extender = SliceFunction::affine({1, 0, 1, 0}, {});
        AffineCheckReport r = check_affine_transform(extender, 1.0, 0.0, seed + 6);
        if (std::abs(r.hermitian_residual) <= 1e-3) {
            note += "extends-to-R falsifier not rejected; residual " +
                    std::to_string(std::abs(r.hermitian_residual));
            gates_ok = false;
        }
        return gates_ok ? worst : 1.0;
    }));

    // 9. OCS matrices: intertwining, pushforward, invariants
    report.checks.push_back(timed("ocs_matrices", 1e-8, 5.0, [&](std::string& note) {
        Rng rng(seed + 7);
        double intertwine = 0;
        for (int s = 0; s < 1000; ++s) {
            Quaternion q = sample_quaternion(rng, 2.0, 0.0);
            q.q1 = std::abs(q.q1) + 0.05;
            intertwine = std::max(intertwine, verify_intertwine(q));
        }
        if (intertwine >= 1e-10) {
            note = "intertwining residual " + std::to_string(intertwine);
            return 1.0;
        }
        double worst = 0;
        double invariants = 0;
        for (int s = 0; s < 1000; ++s) {
            Quaternion x = sample_quaternion(rng, 2.0, 0.05);
            SliceCoords sc = decompose(x);
            if (sc.I.a < -0.999) continue; // stay away from the singular semislice
            Pushforward pf = pushforward(f0, x);
            worst = std::max(worst, pf.residual_vs_slice);
            CSInvariants inv = cs_invariants(pf.m);
            invariants = std::max({invariants, inv.square_residual, inv.orthogonality_residual,
                                   inv.det_residual});
            CSInvariants tw = cs_invariants(j_from_twistor(sample_cplx(rng)));
            invariants = std::max({invariants, tw.square_residual, tw.orthogonality_residual,
                                   tw.det_residual});
        }
        if (invariants >= 1e-10) {
            note = "matrix invariant residual " + std::to_string(invariants);
            return 1.0;
        }
        return worst;
    }));

    // 10. image of f0 and the preimage formulas
    report.checks.push_back(timed("image_preimage", 1e-10, 2.0, [&](std::string& note) {
        Rng rng(seed + 8);
        double worst = 0;
        for (int s = 0; s < 1000; ++s) {
            Quaternion q = sample_quaternion(rng, 2.0, 0.0);
            q.q1 = std::abs(q.q1) + 1e-3;
            worst = std::max(worst, dist(f0.eval(preimage(q).recompose()), q));
        }
        for (int s = 0; s < 1000; ++s) {
            Quaternion x = sample_quaternion(rng, 2.0, 0.05);
            if (decompose(x).I.a <= -1.0 + 1e-12) continue;
            if (!(f0.eval(x).q1 > 0)) {
                note = "image left the open half space";
                return 1.0;
            }
        }
        return worst;
    }));

    // 11. quartic scroll fibre structure
    report.checks.push_back(timed("quartic_scroll_fibers", 1e-12, 5.0, [&](std::string& note) {
        HomoPoly K = quartic_scroll();
        for (double t : {0.3, 0.7, 1.5}) {
            FiberReport r = fiber_cardinality(K, {t * t, t, 0, 0});
            if (!r.contained) {
                note = "parabola fibre at t = " + std::to_string(t) + " not contained";
                return 1.0;
            }
        }
        Rng rng(seed + 9);
        for (int s = 0; s < 100; ++s) {
            Quaternion q = sample_quaternion(rng, 1.5, 0.2);
            FiberReport r = fiber_cardinality(K, q);
            if (r.count != 4) {
                note = "generic fibre count " + std::to_string(r.count);
                return 1.0;
            }
        }
        const double pts[5][2] = {{0.1, 0}, {0, 0.2}, {0.15, 0.1}, {-0.2, 0.05}, {0.05, -0.25}};
        for (const auto& p : pts) {
            double r2 = p[0] * p[0] + p[1] * p[1];
            FiberReport r = fiber_cardinality(K, {0.25 - r2, 0, p[0], p[1]});
            if (!r.tangent) {
                note = "paraboloid fibre shows no double point";
                return 1.0;
            }
        }
        return 0.0;
    }));

    // 12. sliceness control: reject the ellipsoid example, accept the battery
    report.checks.push_back(timed("sliceness_control", 1e-10, 1.0, [&](std::string& note) {
        auto ellipsoid = [](Quaternion x) {
            Quaternion I = decompose(x).I.as_quaternion();
            Quaternion i = Quaternion::unit_i();
            return I + 2.0 * (i * I * i);
        };
        SlicenessReport bad = check_sliceness(ellipsoid, ImaginaryUnit::j(), ImaginaryUnit::k(),
                                              seed + 10);
        if (bad.slice || bad.residual <= 1.0) {
            note = "ellipsoid counterexample not rejected";
            return 1.0;
        }
        double worst = 0;
        for (const auto& item : battery_functions()) {
            const SliceFunction& fn = item.fn;
            SlicenessReport good = check_sliceness(
                [&fn](Quaternion x) { return fn.eval(x); }, ImaginaryUnit::j(), ImaginaryUnit::k(),
                seed + 10);
            worst = std::max(worst, good.residual);
        }
        return worst;
    }));

    report.all_pass = true;
    for (const auto& c : report.checks) report.all_pass = report.all_pass && c.pass;
    return report;
}

} // namespace slicetw
