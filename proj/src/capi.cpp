#include "slicetwistor.h"

#include <cstring>
#include <string>

#include "slicetw/grass.hpp"
#include "slicetw/ocs.hpp"
#include "slicetw/suite.hpp"
#include "slicetw/surfaces.hpp"
#include "slicetw/twistor.hpp"

using namespace slicetw;

struct st_fn {
    SliceFunction fn;
};

struct st_surface {
    HomoPoly poly;
};

namespace {

thread_local std::string g_last_error;

st_status status_of(Err e) {
    switch (e) {
    case Err::RealInput: return ST_ERR_REAL_INPUT;
    case Err::SouthPole: return ST_ERR_SOUTH_POLE;
    case Err::Pole: return ST_ERR_POLE;
    case Err::BranchCut: return ST_ERR_OUT_OF_DOMAIN;
    case Err::OutOfDomain: return ST_ERR_OUT_OF_DOMAIN;
    case Err::SyntaxError: return ST_ERR_PARSE;
    case Err::DegenerateUnits:
    case Err::DegeneratePlane:
    case Err::BranchInconsistent: return ST_ERR_DEGENERATE;
    case Err::NotAStem: return ST_ERR_NOT_A_STEM;
    case Err::DomainMismatch: return ST_ERR_OUT_OF_DOMAIN;
    case Err::ZeroNormal: return ST_ERR_ZERO_NORMAL;
    case Err::NotInvertible: return ST_ERR_NOT_INVERTIBLE;
    case Err::XiSixVanishes: return ST_ERR_XI6_VANISHES;
    case Err::NotSliceAffine: return ST_ERR_NOT_SLICE_AFFINE;
    case Err::SingularDifferential: return ST_ERR_SINGULAR;
    case Err::WrongHalfSpace: return ST_ERR_WRONG_HALF_SPACE;
    case Err::TooLarge: return ST_ERR_TOO_LARGE;
    case Err::InvalidArgument: return ST_ERR_INVALID_ARGUMENT;
    }
    return ST_ERR_INTERNAL;
}

template <typename Body> st_status guarded(Body&& body) {
    try {
        body();
        return ST_OK;
    } catch (const Error& e) {
        g_last_error = e.what();
        return status_of(e.code());
    } catch (const nlohmann::json::exception& e) {
        g_last_error = e.what();
        return ST_ERR_PARSE;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return ST_ERR_INTERNAL;
    }
}

char* copy_out(const std::string& s) {
    char* buf = new char[s.size() + 1];
    std::memcpy(buf, s.c_str(), s.size() + 1);
    return buf;
}

st_status require(bool ok, const char* what) {
    if (!ok) {
        g_last_error = what;
        return ST_ERR_INVALID_ARGUMENT;
    }
    return ST_OK;
}

} // namespace

extern "C" {

const char* st_status_name(st_status s) {
    switch (s) {
    case ST_OK: return "ok";
    case ST_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case ST_ERR_PARSE: return "parse_error";
    case ST_ERR_REAL_INPUT: return "real_input";
    case ST_ERR_OUT_OF_DOMAIN: return "out_of_domain";
    case ST_ERR_POLE: return "pole";
    case ST_ERR_SOUTH_POLE: return "south_pole";
    case ST_ERR_DEGENERATE: return "degenerate";
    case ST_ERR_NOT_A_STEM: return "not_a_stem";
    case ST_ERR_ZERO_NORMAL: return "zero_normal";
    case ST_ERR_NOT_INVERTIBLE: return "not_invertible";
    case ST_ERR_XI6_VANISHES: return "xi6_vanishes";
    case ST_ERR_NOT_SLICE_AFFINE: return "not_slice_affine";
    case ST_ERR_SINGULAR: return "singular";
    case ST_ERR_WRONG_HALF_SPACE: return "wrong_half_space";
    case ST_ERR_TOO_LARGE: return "too_large";
    case ST_ERR_IO: return "io_error";
    case ST_ERR_INTERNAL: return "internal_error";
    }
    return "unknown";
}

const char* st_last_error(void) { return g_last_error.c_str(); }

void st_buffer_free(char* buf) { delete[] buf; }

st_status st_fn_from_json(const char* json_text, st_fn** out) {
    if (st_status s = require(json_text && out, "null argument")) return s;
    return guarded([&] {
        auto j = nlohmann::json::parse(json_text);
        *out = new st_fn{SliceFunction::from_json(j)};
    });
}

st_status st_fn_from_exprs(const char* g, const char* ghat, const char* h, const char* hhat,
                           st_fn** out) {
    if (st_status s = require(g && ghat && h && hhat && out, "null argument")) return s;
    return guarded([&] {
        *out = new st_fn{SliceFunction(HoloMap::parse(g), HoloMap::parse(ghat), HoloMap::parse(h),
                                       HoloMap::parse(hhat))};
    });
}

void st_fn_free(st_fn* fn) { delete fn; }

st_status st_fn_to_json(const st_fn* fn, char** json_out) {
    if (st_status s = require(fn && json_out, "null argument")) return s;
    return guarded([&] { *json_out = copy_out(fn->fn.to_json().dump()); });
}

st_status st_fn_eval(const st_fn* fn, const double q[4], double out[4]) {
    if (st_status s = require(fn && q && out, "null argument")) return s;
    return guarded([&] {
        Quaternion y = fn->fn.eval({q[0], q[1], q[2], q[3]});
        out[0] = y.q0;
        out[1] = y.q1;
        out[2] = y.q2;
        out[3] = y.q3;
    });
}

st_status st_fn_lift(const st_fn* fn, const double u[2], const double v[2], double out[8]) {
    if (st_status s = require(fn && u && v && out, "null argument")) return s;
    return guarded([&] {
        ProjPoint3 p = lift(fn->fn, {u[0], u[1]}, {v[0], v[1]});
        for (int k = 0; k < 4; ++k) {
            out[2 * k] = p[k].real();
            out[2 * k + 1] = p[k].imag();
        }
    });
}

st_status st_fn_transform_at(const st_fn* fn, const double v[2], double out[12]) {
    if (st_status s = require(fn && v && out, "null argument")) return s;
    return guarded([&] {
        ProjPoint5 p = transform(fn->fn).eval({v[0], v[1]});
        for (int k = 0; k < 6; ++k) {
            out[2 * k] = p[k].real();
            out[2 * k + 1] = p[k].imag();
        }
    });
}

st_status st_fn_transform_exprs(const st_fn* fn, char** json_out) {
    if (st_status s = require(fn && json_out, "null argument")) return s;
    return guarded([&] {
        auto ex = transform(fn->fn).exprs();
        nlohmann::ordered_json j = nlohmann::ordered_json::array();
        for (const auto& e : ex) j.push_back(e);
        *json_out = copy_out(j.dump());
    });
}

st_status st_surface_from_json(const char* json_text, st_surface** out) {
    if (st_status s = require(json_text && out, "null argument")) return s;
    return guarded([&] {
        *out = new st_surface{HomoPoly::from_json(nlohmann::json::parse(json_text))};
    });
}

st_status st_surface_catalog(const char* name, const double* params, int nparams,
                             st_surface** out) {
    if (st_status s = require(name && out && nparams >= 0 && (params || nparams == 0),
                              "null argument"))
        return s;
    return guarded([&] {
        std::vector<double> p(params, params + nparams);
        *out = new st_surface{catalog(name, p)};
    });
}

void st_surface_free(st_surface* s) { delete s; }

st_status st_surface_to_json(const st_surface* s, char** json_out) {
    if (st_status st = require(s && json_out, "null argument")) return st;
    return guarded([&] { *json_out = copy_out(s->poly.to_json().dump()); });
}

st_status st_contains_lift(const st_surface* s, const st_fn* fn, int samples,
                           unsigned long long seed, double tol, char** report_json) {
    if (st_status st = require(s && fn && report_json && samples > 0, "bad argument")) return st;
    return guarded([&] {
        ContainsReport r = contains_lift(s->poly, fn->fn, samples, seed, tol);
        nlohmann::ordered_json j;
        j["command"] = "contains";
        j["config"] = {{"samples", samples}, {"seed", seed}, {"tol", tol}};
        j["contained"] = r.contained;
        j["residual"] = r.residual;
        j["samples_used"] = r.samples_used;
        j["samples_rejected"] = r.samples_rejected;
        j["exact_checked"] = r.exact_checked;
        if (r.exact_checked) j["exact_zero"] = r.exact_zero;
        *report_json = copy_out(j.dump());
    });
}

st_status st_fiber_cardinality(const st_surface* s, const double q[4], char** report_json) {
    if (st_status st = require(s && q && report_json, "null argument")) return st;
    return guarded([&] {
        FiberReport r = fiber_cardinality(s->poly, {q[0], q[1], q[2], q[3]});
        nlohmann::ordered_json j;
        j["contained"] = r.contained;
        j["count"] = r.count;
        j["multiplicities"] = r.multiplicities;
        j["tangent"] = r.tangent;
        j["generic"] = r.generic;
        *report_json = copy_out(j.dump());
    });
}

st_status st_scan(const st_surface* s, const double box[8], const int res[4], char** csv_out) {
    if (st_status st = require(s && box && res && csv_out, "null argument")) return st;
    return guarded([&] {
        std::array<double, 8> b;
        std::copy(box, box + 8, b.begin());
        std::array<int, 4> r{res[0], res[1], res[2], res[3]};
        *csv_out = copy_out(discriminant_scan(s->poly, b, r).to_csv());
    });
}

st_status st_twistor_lines(const st_fn* fn, const double box[4], int grid, double tol,
                           char** report_json) {
    if (st_status st = require(fn && box && report_json && grid >= 8, "bad argument")) return st;
    return guarded([&] {
        FinderOptions opts;
        opts.grid = grid;
        opts.tol = tol > 0 ? tol : 1e-8;
        auto hits = find_twistor_lines(transform(fn->fn), {box[0], box[1], box[2], box[3]}, opts);
        nlohmann::ordered_json j;
        j["command"] = "twistor-lines";
        j["config"] = {{"box", {box[0], box[1], box[2], box[3]}},
                       {"grid", grid},
                       {"tol", opts.tol}};
        j["lines"] = nlohmann::ordered_json::array();
        for (const auto& h : hits)
            j["lines"].push_back({{"v", {h.v.real(), h.v.imag()}}, {"residual", h.residual}});
        *report_json = copy_out(j.dump());
    });
}

st_status st_affine_check(const st_fn* fn, const double A[2], const double B[2],
                          unsigned long long seed, char** report_json) {
    if (st_status st = require(fn && A && B && report_json, "null argument")) return st;
    return guarded([&] {
        AffineCheckReport r = check_affine_transform(fn->fn, {A[0], A[1]}, {B[0], B[1]}, seed);
        nlohmann::ordered_json j;
        j["command"] = "affine-check";
        j["config"] = {{"A", {A[0], A[1]}}, {"B", {B[0], B[1]}}, {"seed", seed}};
        j["affine"] = r.affine;
        j["hermitian_residual"] = {r.hermitian_residual.real(), r.hermitian_residual.imag()};
        j["fit_residual"] = r.fit_residual;
        *report_json = copy_out(j.dump());
    });
}

st_status st_ocs_intertwine(int samples, unsigned long long seed, char** report_json) {
    if (st_status st = require(report_json && samples > 0, "bad argument")) return st;
    return guarded([&] {
        Rng rng(seed);
        double worst = 0;
        for (int s = 0; s < samples; ++s) {
            Quaternion q = sample_quaternion(rng, 2.0, 0.0);
            q.q1 = std::abs(q.q1) + 0.05;
            worst = std::max(worst, verify_intertwine(q));
        }
        nlohmann::ordered_json j;
        j["command"] = "ocs verify-intertwine";
        j["config"] = {{"samples", samples}, {"seed", seed}};
        j["max_residual"] = worst;
        *report_json = copy_out(j.dump());
    });
}

st_status st_ocs_preimage(const double q[4], double x_out[4]) {
    if (st_status st = require(q && x_out, "null argument")) return st;
    return guarded([&] {
        Quaternion x = preimage({q[0], q[1], q[2], q[3]}).recompose();
        x_out[0] = x.q0;
        x_out[1] = x.q1;
        x_out[2] = x.q2;
        x_out[3] = x.q3;
    });
}

st_status st_ocs_pushforward(const st_fn* fn, const double x[4], double mat_out[16],
                             double* residual_out) {
    if (st_status st = require(fn && x && mat_out && residual_out, "null argument")) return st;
    return guarded([&] {
        Pushforward p = pushforward(fn->fn, {x[0], x[1], x[2], x[3]});
        for (int k = 0; k < 16; ++k) mat_out[k] = p.m.m[size_t(k)];
        *residual_out = p.residual_vs_slice;
    });
}

st_status st_suite(unsigned long long seed, char** report_json) {
    if (st_status st = require(report_json != nullptr, "null argument")) return st;
    return guarded([&] {
        SuiteReport r = run_acceptance_suite(seed);
        *report_json = copy_out(r.to_json().dump(2));
    });
}

} // extern "C"
