// Command-line front end for the slicetwistor shared library. All numerical
// work happens behind the C API; this binary only parses flags, moves JSON
// around and sets exit codes: 0 all verdicts pass, 1 a numerical verdict
// failed, 2 usage error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "slicetwistor.h"

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_input(const std::string& arg) {
    // inline JSON is accepted next to file paths
    if (!arg.empty() && (arg[0] == '{' || arg[0] == '[')) return arg;
    std::ifstream in(arg);
    if (!in) throw UsageError("cannot open file: " + arg);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void check(st_status s, const std::string& what) {
    if (s != ST_OK)
        throw std::runtime_error(what + " failed: " + st_status_name(s) + " (" + st_last_error() +
                                 ")");
}

struct FnHandle {
    st_fn* fn = nullptr;
    ~FnHandle() { st_fn_free(fn); }
};

struct SurfaceHandle {
    st_surface* s = nullptr;
    ~SurfaceHandle() { st_surface_free(s); }
};

struct Buffer {
    char* p = nullptr;
    ~Buffer() { st_buffer_free(p); }
    std::string str() const { return p ? p : ""; }
};

FnHandle load_fn(const std::string& arg) {
    FnHandle h;
    check(st_fn_from_json(read_input(arg).c_str(), &h.fn), "loading --fn");
    return h;
}

SurfaceHandle load_surface(const std::string& arg) {
    SurfaceHandle h;
    std::string text = read_input(arg);
    check(st_surface_from_json(text.c_str(), &h.s), "loading --surface");
    return h;
}

// accepts "1.5", "i", "-2i", "1+2i", "0.5-i"
void parse_complex(const std::string& text, double out[2]) {
    out[0] = out[1] = 0;
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw UsageError("empty complex literal");
    size_t split = std::string::npos;
    for (size_t k = 1; k < s.size(); ++k) {
        if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') split = k;
    }
    auto parse_part = [](const std::string& part, bool imaginary) {
        if (part.empty()) throw UsageError("malformed complex literal");
        if (imaginary) {
            std::string mant = part.substr(0, part.size() - 1); // strip the i
            if (mant.empty() || mant == "+") return 1.0;
            if (mant == "-") return -1.0;
            return std::stod(mant);
        }
        return std::stod(part);
    };
    if (s.back() == 'i') {
        if (split == std::string::npos) {
            out[1] = parse_part(s, true);
        } else {
            out[0] = parse_part(s.substr(0, split), false);
            out[1] = parse_part(s.substr(split), true);
        }
    } else {
        out[0] = parse_part(s, false);
    }
}

void parse_quaternion(const std::string& text, double out[4]) {
    std::stringstream ss(text);
    std::string item;
    int k = 0;
    while (std::getline(ss, item, ',') && k < 4) out[k++] = std::stod(item);
    if (k != 4) throw UsageError("quaternion needs 4 comma-separated components");
}

void emit(const std::string& payload, const std::string& out_file, bool pretty) {
    std::string text = payload;
    if (pretty && !payload.empty() && (payload[0] == '{' || payload[0] == '[')) {
        text = nlohmann::ordered_json::parse(payload).dump(2);
    }
    if (!out_file.empty()) {
        std::ofstream out(out_file);
        if (!out) throw UsageError("cannot write " + out_file);
        out << text << '\n';
    } else {
        std::cout << text << '\n';
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"slice regular functions and their twistor geometry"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string fn_arg, surface_arg, out_file, u_arg, v_arg, q_arg, a_arg = "1", b_arg = "0";
    unsigned long long seed = 0;
    int samples = 500, grid = 200;
    double tol = 0;
    std::vector<double> box;
    std::vector<int> res;
    bool pretty = false;
    app.add_flag("--pretty", pretty, "indent JSON output");

    auto* eval_cmd = app.add_subcommand("eval", "evaluate a slice function at a quaternion");
    eval_cmd->add_option("--fn", fn_arg, "function JSON file or inline JSON")->required();
    eval_cmd->add_option("--q", q_arg, "quaternion q0,q1,q2,q3")->required();
    eval_cmd->add_option("--out", out_file);

    auto* lift_cmd = app.add_subcommand("lift", "twistor lift at (u, v)");
    lift_cmd->add_option("--fn", fn_arg)->required();
    lift_cmd->add_option("--u", u_arg, "complex, e.g. \"1+i\"")->required();
    lift_cmd->add_option("--v", v_arg, "complex with Im v > 0")->required();
    lift_cmd->add_option("--out", out_file);

    auto* contains_cmd = app.add_subcommand("contains", "lift membership in a surface");
    contains_cmd->add_option("--surface", surface_arg)->required();
    contains_cmd->add_option("--fn", fn_arg)->required();
    contains_cmd->add_option("--samples", samples);
    contains_cmd->add_option("--seed", seed)->required();
    contains_cmd->add_option("--tol", tol);
    contains_cmd->add_option("--out", out_file);

    auto* scan_cmd = app.add_subcommand("scan", "fibre cardinality over a grid, CSV");
    scan_cmd->add_option("--surface", surface_arg)->required();
    scan_cmd->add_option("--box", box, "q0lo q0hi q1lo q1hi q2lo q2hi q3lo q3hi")
        ->expected(8)
        ->required();
    scan_cmd->add_option("--res", res, "per-axis resolution (1 or 4 values)")
        ->expected(1, 4)
        ->required();
    scan_cmd->add_option("--out", out_file);

    auto* transform_cmd = app.add_subcommand("transform", "twistor transform coordinates");
    transform_cmd->add_option("--fn", fn_arg)->required();
    transform_cmd->add_option("--v", v_arg, "optional evaluation point");
    transform_cmd->add_option("--out", out_file);

    auto* lines_cmd = app.add_subcommand("twistor-lines", "sigma fixed points of the transform");
    lines_cmd->add_option("--fn", fn_arg)->required();
    lines_cmd->add_option("--box", box, "re_lo re_hi im_lo im_hi")->expected(4)->required();
    lines_cmd->add_option("--grid", grid);
    lines_cmd->add_option("--tol", tol);
    lines_cmd->add_option("--out", out_file);

    auto* affine_cmd = app.add_subcommand("affine-check", "hermitian rational-line criterion");
    affine_cmd->add_option("--fn", fn_arg)->required();
    affine_cmd->add_option("--A", a_arg, "complex coefficient");
    affine_cmd->add_option("--B", b_arg, "complex coefficient");
    affine_cmd->add_option("--seed", seed)->required();
    affine_cmd->add_option("--out", out_file);

    auto* ocs_cmd = app.add_subcommand("ocs", "orthogonal-complex-structure checks");
    ocs_cmd->require_subcommand(1);
    auto* inter_cmd = ocs_cmd->add_subcommand("verify-intertwine", "dg . J^f = J_i . dg residual");
    inter_cmd->add_option("--samples", samples);
    inter_cmd->add_option("--seed", seed)->required();
    inter_cmd->add_option("--out", out_file);
    auto* pre_cmd = ocs_cmd->add_subcommand("preimage", "solve x(1-Ii)/2 = q");
    pre_cmd->add_option("--q", q_arg)->required();
    pre_cmd->add_option("--out", out_file);
    auto* push_cmd = ocs_cmd->add_subcommand("pushforward", "pushforward matrix at a point");
    push_cmd->add_option("--fn", fn_arg)->required();
    push_cmd->add_option("--q", q_arg, "base point q0,q1,q2,q3")->required();
    push_cmd->add_option("--out", out_file);

    auto* suite_cmd = app.add_subcommand("suite", "full verification battery");
    suite_cmd->add_option("--seed", seed)->required();
    suite_cmd->add_option("--out", out_file);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*eval_cmd) {
            FnHandle fn = load_fn(fn_arg);
            double q[4], y[4];
            parse_quaternion(q_arg, q);
            check(st_fn_eval(fn.fn, q, y), "eval");
            nlohmann::ordered_json j;
            j["command"] = "eval";
            j["q"] = {q[0], q[1], q[2], q[3]};
            j["value"] = {y[0], y[1], y[2], y[3]};
            emit(j.dump(), out_file, pretty);
        } else if (*lift_cmd) {
            FnHandle fn = load_fn(fn_arg);
            double u[2], v[2], p[8];
            parse_complex(u_arg, u);
            parse_complex(v_arg, v);
            check(st_fn_lift(fn.fn, u, v, p), "lift");
            nlohmann::ordered_json j;
            j["command"] = "lift";
            j["u"] = {u[0], u[1]};
            j["v"] = {v[0], v[1]};
            j["point"] = nlohmann::ordered_json::array();
            for (int k = 0; k < 4; ++k) j["point"].push_back({p[2 * k], p[2 * k + 1]});
            emit(j.dump(), out_file, pretty);
        } else if (*contains_cmd) {
            FnHandle fn = load_fn(fn_arg);
            SurfaceHandle s = load_surface(surface_arg);
            Buffer rep;
            check(st_contains_lift(s.s, fn.fn, samples, seed, tol > 0 ? tol : 1e-8, &rep.p),
                  "contains");
            emit(rep.str(), out_file, pretty);
            auto j = nlohmann::json::parse(rep.str());
            if (!j["contained"].get<bool>()) {
                std::cerr << "contains: lift is not contained (residual " << j["residual"]
                          << ")\n";
                return 1;
            }
        } else if (*scan_cmd) {
            SurfaceHandle s = load_surface(surface_arg);
            double b[8];
            int r[4];
            for (int k = 0; k < 8; ++k) b[k] = box[size_t(k)];
            for (int k = 0; k < 4; ++k) r[k] = res.size() == 1 ? res[0] : res[size_t(k)];
            Buffer csv;
            check(st_scan(s.s, b, r, &csv.p), "scan");
            emit(csv.str(), out_file, false);
        } else if (*transform_cmd) {
            FnHandle fn = load_fn(fn_arg);
            Buffer exprs;
            check(st_fn_transform_exprs(fn.fn, &exprs.p), "transform");
            nlohmann::ordered_json j;
            j["command"] = "transform";
            j["coordinates"] = nlohmann::json::parse(exprs.str());
            if (!v_arg.empty()) {
                double v[2], xi[12];
                parse_complex(v_arg, v);
                check(st_fn_transform_at(fn.fn, v, xi), "transform eval");
                j["at"] = {v[0], v[1]};
                j["value"] = nlohmann::ordered_json::array();
                for (int k = 0; k < 6; ++k) j["value"].push_back({xi[2 * k], xi[2 * k + 1]});
            }
            emit(j.dump(), out_file, pretty);
        } else if (*lines_cmd) {
            FnHandle fn = load_fn(fn_arg);
            double b[4];
            for (int k = 0; k < 4; ++k) b[k] = box[size_t(k)];
            Buffer rep;
            check(st_twistor_lines(fn.fn, b, grid, tol, &rep.p), "twistor-lines");
            emit(rep.str(), out_file, pretty);
        } else if (*affine_cmd) {
            FnHandle fn = load_fn(fn_arg);
            double A[2], B[2];
            parse_complex(a_arg, A);
            parse_complex(b_arg, B);
            Buffer rep;
            check(st_affine_check(fn.fn, A, B, seed, &rep.p), "affine-check");
            emit(rep.str(), out_file, pretty);
        } else if (*inter_cmd) {
            Buffer rep;
            check(st_ocs_intertwine(samples, seed, &rep.p), "ocs verify-intertwine");
            emit(rep.str(), out_file, pretty);
            auto j = nlohmann::json::parse(rep.str());
            if (j["max_residual"].get<double>() >= 1e-10) {
                std::cerr << "ocs verify-intertwine: residual above 1e-10\n";
                return 1;
            }
        } else if (*pre_cmd) {
            double q[4], x[4];
            parse_quaternion(q_arg, q);
            check(st_ocs_preimage(q, x), "ocs preimage");
            nlohmann::ordered_json j;
            j["command"] = "ocs preimage";
            j["q"] = {q[0], q[1], q[2], q[3]};
            j["x"] = {x[0], x[1], x[2], x[3]};
            emit(j.dump(), out_file, pretty);
        } else if (*push_cmd) {
            FnHandle fn = load_fn(fn_arg);
            double q[4], m[16], residual = 0;
            parse_quaternion(q_arg, q);
            check(st_ocs_pushforward(fn.fn, q, m, &residual), "ocs pushforward");
            nlohmann::ordered_json j;
            j["command"] = "ocs pushforward";
            j["q"] = {q[0], q[1], q[2], q[3]};
            j["matrix"] = nlohmann::ordered_json::array(); // row-major
            for (int k = 0; k < 16; ++k) j["matrix"].push_back(m[k]);
            j["residual_vs_slice"] = residual;
            emit(j.dump(), out_file, pretty);
        } else if (*suite_cmd) {
            Buffer rep;
            check(st_suite(seed, &rep.p), "suite");
            auto j = nlohmann::json::parse(rep.str());
            if (pretty) {
                for (const auto& c : j["checks"])
                    std::cerr << (c["verdict"] == "pass" ? "[pass] " : "[FAIL] ")
                              << c["name"].get<std::string>() << "  residual "
                              << c["residual"].get<double>() << " (tol "
                              << c["tolerance"].get<double>() << ")\n";
            }
            emit(rep.str(), out_file, pretty);
            if (!j["all_pass"].get<bool>()) {
                for (const auto& c : j["checks"])
                    if (c["verdict"] != "pass")
                        std::cerr << "suite: failing check: " << c["name"].get<std::string>()
                                  << "\n";
                return 1;
            }
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
