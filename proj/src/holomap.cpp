#include "slicetw/holomap.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>

namespace slicetw {

enum class Op { Const, Var, Add, Sub, Mul, Div, Pow, Sqrt, Exp, Neg };

struct HoloMap::Node {
    Op op;
    cplx value{};
    int expo = 0;
    NodePtr lhs, rhs;
};

namespace {

using Node = HoloMap::Node;
using NodePtr = HoloMap::NodePtr;

NodePtr make(Op op, cplx value = {}, int expo = 0, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->value = value;
    n->expo = expo;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
}

bool const_val(const NodePtr& n, cplx& out) {
    if (n->op == Op::Const) {
        out = n->value;
        return true;
    }
    return false;
}

cplx normalize_imag(cplx z) {
    // -0.0 imaginary parts collapse onto the +0.0 side of every cut
    if (z.imag() == 0.0) return {z.real(), +0.0};
    return z;
}

NodePtr nconst(cplx c) { return make(Op::Const, c); }

NodePtr nadd(NodePtr a, NodePtr b) {
    cplx x, y;
    if (const_val(a, x) && const_val(b, y)) return nconst(x + y);
    if (const_val(a, x) && x == 0.0) return b;
    if (const_val(b, y) && y == 0.0) return a;
    return make(Op::Add, {}, 0, std::move(a), std::move(b));
}

NodePtr nsub(NodePtr a, NodePtr b) {
    cplx x, y;
    if (const_val(a, x) && const_val(b, y)) return nconst(x - y);
    if (const_val(b, y) && y == 0.0) return a;
    if (const_val(a, x) && x == 0.0) return make(Op::Neg, {}, 0, std::move(b));
    return make(Op::Sub, {}, 0, std::move(a), std::move(b));
}

NodePtr nmul(NodePtr a, NodePtr b) {
    cplx x, y;
    if (const_val(a, x) && const_val(b, y)) return nconst(x * y);
    if (const_val(a, x)) {
        if (x == 0.0) return nconst(0.0);
        if (x == 1.0) return b;
    }
    if (const_val(b, y)) {
        if (y == 0.0) return nconst(0.0);
        if (y == 1.0) return a;
    }
    return make(Op::Mul, {}, 0, std::move(a), std::move(b));
}

NodePtr ndiv(NodePtr a, NodePtr b) {
    cplx x, y;
    if (const_val(b, y)) {
        if (y == 0.0) fail(Err::Pole, "division by constant zero");
        if (const_val(a, x)) return nconst(x / y);
        if (y == 1.0) return a;
    }
    if (const_val(a, x) && x == 0.0) return nconst(0.0);
    return make(Op::Div, {}, 0, std::move(a), std::move(b));
}

NodePtr nneg(NodePtr a) {
    cplx x;
    if (const_val(a, x)) return nconst(-x);
    if (a->op == Op::Neg) return a->lhs;
    return make(Op::Neg, {}, 0, std::move(a));
}

NodePtr npow(NodePtr a, int n) {
    cplx x;
    if (n == 0) return nconst(1.0);
    if (n == 1) return a;
    if (const_val(a, x)) {
        if (x == 0.0 && n < 0) fail(Err::Pole, "zero to a negative power");
        return nconst(std::pow(x, n));
    }
    return make(Op::Pow, {}, n, std::move(a));
}

NodePtr nsqrt(NodePtr a) { return make(Op::Sqrt, {}, 0, std::move(a)); }
NodePtr nexp(NodePtr a) {
    cplx x;
    if (const_val(a, x)) return nconst(std::exp(x));
    return make(Op::Exp, {}, 0, std::move(a));
}

cplx eval_node(const NodePtr& n, cplx v) {
    switch (n->op) {
    case Op::Const: return n->value;
    case Op::Var: return v;
    case Op::Add: return eval_node(n->lhs, v) + eval_node(n->rhs, v);
    case Op::Sub: return eval_node(n->lhs, v) - eval_node(n->rhs, v);
    case Op::Mul: return eval_node(n->lhs, v) * eval_node(n->rhs, v);
    case Op::Div: {
        cplx den = eval_node(n->rhs, v);
        if (den == 0.0) fail(Err::Pole, "division by zero during evaluation");
        return eval_node(n->lhs, v) / den;
    }
    case Op::Pow: {
        cplx base = eval_node(n->lhs, v);
        if (base == 0.0 && n->expo < 0) fail(Err::Pole, "zero base with negative exponent");
        cplx acc = 1.0;
        int e = n->expo < 0 ? -n->expo : n->expo;
        cplx b = base;
        while (e) {
            if (e & 1) acc *= b;
            b *= b;
            e >>= 1;
        }
        return n->expo < 0 ? 1.0 / acc : acc;
    }
    case Op::Sqrt: return std::sqrt(normalize_imag(eval_node(n->lhs, v)));
    case Op::Exp: return std::exp(eval_node(n->lhs, v));
    case Op::Neg: return -eval_node(n->lhs, v);
    }
    fail(Err::InvalidArgument, "corrupt expression node");
}

double dist_to_cut(cplx z) {
    // distance to the ray (-inf, 0]
    if (z.real() <= 0.0) return std::abs(z.imag());
    return std::abs(z);
}

void cut_distance_node(const NodePtr& n, cplx v, double& best) {
    switch (n->op) {
    case Op::Const:
    case Op::Var: return;
    case Op::Sqrt: {
        best = std::min(best, dist_to_cut(eval_node(n->lhs, v)));
        cut_distance_node(n->lhs, v, best);
        return;
    }
    case Op::Pow:
    case Op::Exp:
    case Op::Neg: cut_distance_node(n->lhs, v, best); return;
    default:
        cut_distance_node(n->lhs, v, best);
        cut_distance_node(n->rhs, v, best);
        return;
    }
}

void pole_distance_node(const NodePtr& n, cplx v, double& best) {
    switch (n->op) {
    case Op::Const:
    case Op::Var: return;
    case Op::Div: {
        best = std::min(best, std::abs(eval_node(n->rhs, v)));
        pole_distance_node(n->lhs, v, best);
        pole_distance_node(n->rhs, v, best);
        return;
    }
    case Op::Pow: {
        if (n->expo < 0) best = std::min(best, std::abs(eval_node(n->lhs, v)));
        pole_distance_node(n->lhs, v, best);
        return;
    }
    case Op::Sqrt:
    case Op::Exp:
    case Op::Neg: pole_distance_node(n->lhs, v, best); return;
    default:
        pole_distance_node(n->lhs, v, best);
        pole_distance_node(n->rhs, v, best);
        return;
    }
}

NodePtr deriv_node(const NodePtr& n) {
    switch (n->op) {
    case Op::Const: return nconst(0.0);
    case Op::Var: return nconst(1.0);
    case Op::Add: return nadd(deriv_node(n->lhs), deriv_node(n->rhs));
    case Op::Sub: return nsub(deriv_node(n->lhs), deriv_node(n->rhs));
    case Op::Mul:
        return nadd(nmul(deriv_node(n->lhs), n->rhs), nmul(n->lhs, deriv_node(n->rhs)));
    case Op::Div:
        return ndiv(nsub(nmul(deriv_node(n->lhs), n->rhs), nmul(n->lhs, deriv_node(n->rhs))),
                    npow(n->rhs, 2));
    case Op::Pow:
        return nmul(nconst(double(n->expo)), nmul(npow(n->lhs, n->expo - 1), deriv_node(n->lhs)));
    case Op::Sqrt:
        // same branch as the node itself
        return ndiv(deriv_node(n->lhs), nmul(nconst(2.0), nsqrt(n->lhs)));
    case Op::Exp: return nmul(deriv_node(n->lhs), nexp(n->lhs));
    case Op::Neg: return nneg(deriv_node(n->lhs));
    }
    fail(Err::InvalidArgument, "corrupt expression node");
}

NodePtr reflect_node(const NodePtr& n) {
    switch (n->op) {
    case Op::Const: return nconst(std::conj(n->value));
    case Op::Var: return make(Op::Var);
    case Op::Add: return nadd(reflect_node(n->lhs), reflect_node(n->rhs));
    case Op::Sub: return nsub(reflect_node(n->lhs), reflect_node(n->rhs));
    case Op::Mul: return nmul(reflect_node(n->lhs), reflect_node(n->rhs));
    case Op::Div: return ndiv(reflect_node(n->lhs), reflect_node(n->rhs));
    case Op::Pow: return npow(reflect_node(n->lhs), n->expo);
    case Op::Sqrt: return nsqrt(reflect_node(n->lhs));
    case Op::Exp: return nexp(reflect_node(n->lhs));
    case Op::Neg: return nneg(reflect_node(n->lhs));
    }
    fail(Err::InvalidArgument, "corrupt expression node");
}

bool rational_node(const NodePtr& n) {
    switch (n->op) {
    case Op::Const: {
        // exactly representable with a modest power-of-two denominator
        auto ok = [](double x) {
            if (!std::isfinite(x)) return false;
            double scaled = x * 1048576.0; // 2^20
            return scaled == std::floor(scaled) && std::abs(scaled) < 9.0e15;
        };
        return ok(n->value.real()) && ok(n->value.imag());
    }
    case Op::Var: return true;
    case Op::Sqrt:
    case Op::Exp: return false;
    case Op::Pow:
    case Op::Neg: return rational_node(n->lhs);
    default: return rational_node(n->lhs) && rational_node(n->rhs);
    }
}

std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    double back = std::strtod(buf, nullptr);
    if (back == x) {
        for (int prec = 1; prec <= 16; ++prec) {
            char shorter[40];
            std::snprintf(shorter, sizeof shorter, "%.*g", prec, x);
            if (std::strtod(shorter, nullptr) == x) return shorter;
        }
    }
    return buf;
}

std::string fmt_const(cplx c) {
    bool re = c.real() != 0.0, im = c.imag() != 0.0;
    if (im && !re) {
        if (c.imag() == 1.0) return "i";
        if (c.imag() == -1.0) return "-i";
        return fmt_double(c.imag()) + "i";
    }
    if (!im) return fmt_double(c.real());
    std::string s = "(" + fmt_double(c.real());
    s += c.imag() > 0 ? " + " : " - ";
    double a = std::abs(c.imag());
    s += (a == 1.0 ? std::string("i") : fmt_double(a) + "i");
    return s + ")";
}

int precedence(Op op) {
    switch (op) {
    case Op::Add:
    case Op::Sub: return 1;
    case Op::Mul:
    case Op::Div: return 2;
    case Op::Neg: return 3;
    case Op::Pow: return 4;
    default: return 5;
    }
}

void print_node(const NodePtr& n, std::string& out, int parent_prec, bool rhs_slot) {
    int prec = precedence(n->op);
    bool parens = prec < parent_prec || (prec == parent_prec && rhs_slot && prec <= 2);
    if (parens) out += '(';
    switch (n->op) {
    case Op::Const: {
        std::string s = fmt_const(n->value);
        // negative literal in an operand slot needs its own parentheses
        if (!parens && parent_prec > 0 && (s[0] == '-')) {
            out += '(';
            out += s;
            out += ')';
        } else {
            out += s;
        }
        break;
    }
    case Op::Var: out += 'v'; break;
    case Op::Add:
        print_node(n->lhs, out, prec, false);
        out += " + ";
        print_node(n->rhs, out, prec, true);
        break;
    case Op::Sub:
        print_node(n->lhs, out, prec, false);
        out += " - ";
        print_node(n->rhs, out, prec, true);
        break;
    case Op::Mul:
        print_node(n->lhs, out, prec, false);
        out += "*";
        print_node(n->rhs, out, prec, true);
        break;
    case Op::Div:
        print_node(n->lhs, out, prec, false);
        out += "/";
        print_node(n->rhs, out, prec, true);
        break;
    case Op::Pow:
        print_node(n->lhs, out, prec + 1, false);
        out += "^";
        out += std::to_string(n->expo);
        break;
    case Op::Sqrt:
        out += "sqrt(";
        print_node(n->lhs, out, 0, false);
        out += ')';
        break;
    case Op::Exp:
        out += "exp(";
        print_node(n->lhs, out, 0, false);
        out += ')';
        break;
    case Op::Neg:
        out += '-';
        print_node(n->lhs, out, prec, true);
        break;
    }
    if (parens) out += ')';
}

// --- recursive-descent parser ------------------------------------------------

struct Parser {
    std::string_view src;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
    }
    char peek() {
        skip_ws();
        return pos < src.size() ? src[pos] : '\0';
    }
    bool accept(char c) {
        if (peek() == c) {
            ++pos;
            return true;
        }
        return false;
    }
    [[noreturn]] void error(const std::string& msg, std::size_t at) {
        fail(Err::SyntaxError, msg + " at offset " + std::to_string(at), at);
    }

    NodePtr parse_expr() {
        NodePtr lhs = parse_term();
        while (true) {
            char c = peek();
            if (c == '+') {
                ++pos;
                lhs = nadd(lhs, parse_term());
            } else if (c == '-') {
                ++pos;
                lhs = nsub(lhs, parse_term());
            } else {
                return lhs;
            }
        }
    }

    NodePtr parse_term() {
        NodePtr lhs = parse_unary();
        while (true) {
            char c = peek();
            if (c == '*') {
                ++pos;
                lhs = nmul(lhs, parse_unary());
            } else if (c == '/') {
                ++pos;
                lhs = ndiv(lhs, parse_unary());
            } else {
                return lhs;
            }
        }
    }

    NodePtr parse_unary() {
        if (accept('-')) return nneg(parse_unary());
        if (accept('+')) return parse_unary();
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_atom();
        if (peek() == '^') {
            ++pos;
            skip_ws();
            std::size_t at = pos;
            bool negative = false;
            if (pos < src.size() && (src[pos] == '-' || src[pos] == '+')) {
                negative = src[pos] == '-';
                ++pos;
            }
            std::size_t start = pos;
            while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
            if (pos == start) error("expected integer exponent", at);
            long e = std::strtol(std::string(src.substr(start, pos - start)).c_str(), nullptr, 10);
            if (e > 64) error("exponent too large", at);
            return npow(base, int(negative ? -e : e));
        }
        return base;
    }

    NodePtr parse_atom() {
        char c = peek();
        std::size_t at = pos;
        if (c == '(') {
            ++pos;
            NodePtr inner = parse_expr();
            if (!accept(')')) error("expected ')'", pos);
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = pos;
            while (pos < src.size() && std::isalnum(static_cast<unsigned char>(src[pos]))) ++pos;
            std::string_view word = src.substr(start, pos - start);
            if (word == "v") return make(Op::Var);
            if (word == "i") return nconst(cplx(0, 1));
            if (word == "sqrt" || word == "exp") {
                if (!accept('(')) error("expected '(' after function name", pos);
                NodePtr arg = parse_expr();
                if (!accept(')')) error("expected ')'", pos);
                return word == "sqrt" ? nsqrt(arg) : nexp(arg);
            }
            error("unknown identifier '" + std::string(word) + "'", start);
        }
        error("unexpected character", at);
    }

    NodePtr parse_number() {
        skip_ws();
        std::size_t start = pos;
        while (pos < src.size() && (std::isdigit(static_cast<unsigned char>(src[pos])) || src[pos] == '.'))
            ++pos;
        if (pos < src.size() && (src[pos] == 'e' || src[pos] == 'E')) {
            std::size_t mark = pos++;
            if (pos < src.size() && (src[pos] == '+' || src[pos] == '-')) ++pos;
            if (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) {
                while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
            } else {
                pos = mark; // not an exponent, leave it for the caller
            }
        }
        std::string text(src.substr(start, pos - start));
        char* end = nullptr;
        double x = std::strtod(text.c_str(), &end);
        if (end != text.c_str() + text.size()) error("malformed number", start);
        if (pos < src.size() && src[pos] == 'i') {
            ++pos;
            return nconst(cplx(0, x));
        }
        return nconst(cplx(x, 0));
    }
};

nlohmann::ordered_json json_node(const NodePtr& n) {
    using j = nlohmann::ordered_json;
    switch (n->op) {
    case Op::Const: return j::array({"const", j::array({n->value.real(), n->value.imag()})});
    case Op::Var: return j::array({"var"});
    case Op::Add: return j::array({"add", json_node(n->lhs), json_node(n->rhs)});
    case Op::Sub: return j::array({"sub", json_node(n->lhs), json_node(n->rhs)});
    case Op::Mul: return j::array({"mul", json_node(n->lhs), json_node(n->rhs)});
    case Op::Div: return j::array({"div", json_node(n->lhs), json_node(n->rhs)});
    case Op::Pow: return j::array({"pow", json_node(n->lhs), n->expo});
    case Op::Sqrt: return j::array({"sqrt", json_node(n->lhs)});
    case Op::Exp: return j::array({"exp", json_node(n->lhs)});
    case Op::Neg: return j::array({"neg", json_node(n->lhs)});
    }
    fail(Err::InvalidArgument, "corrupt expression node");
}

NodePtr node_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.empty() || !j[0].is_string())
        fail(Err::SyntaxError, "expression JSON must be a tagged array");
    const std::string tag = j[0].get<std::string>();
    auto child = [&](std::size_t k) { return node_from_json(j.at(k)); };
    if (tag == "const") return nconst({j.at(1).at(0).get<double>(), j.at(1).at(1).get<double>()});
    if (tag == "var") return make(Op::Var);
    if (tag == "add") return nadd(child(1), child(2));
    if (tag == "sub") return nsub(child(1), child(2));
    if (tag == "mul") return nmul(child(1), child(2));
    if (tag == "div") return ndiv(child(1), child(2));
    if (tag == "pow") return npow(child(1), j.at(2).get<int>());
    if (tag == "sqrt") return nsqrt(child(1));
    if (tag == "exp") return nexp(child(1));
    if (tag == "neg") return nneg(child(1));
    fail(Err::SyntaxError, "unknown expression tag '" + tag + "'");
}

} // namespace

HoloMap HoloMap::constant(cplx c) { return HoloMap(nconst(c)); }
HoloMap HoloMap::var() { return HoloMap(make(Op::Var)); }

HoloMap HoloMap::parse(std::string_view src) {
    Parser p{src};
    NodePtr n = p.parse_expr();
    p.skip_ws();
    if (p.pos != src.size())
        fail(Err::SyntaxError, "trailing input at offset " + std::to_string(p.pos), p.pos);
    return HoloMap(std::move(n));
}

HoloMap operator+(const HoloMap& a, const HoloMap& b) { return HoloMap(nadd(a.root_, b.root_)); }
HoloMap operator-(const HoloMap& a, const HoloMap& b) { return HoloMap(nsub(a.root_, b.root_)); }
HoloMap operator*(const HoloMap& a, const HoloMap& b) { return HoloMap(nmul(a.root_, b.root_)); }
HoloMap operator/(const HoloMap& a, const HoloMap& b) { return HoloMap(ndiv(a.root_, b.root_)); }
HoloMap operator-(const HoloMap& a) { return HoloMap(nneg(a.root_)); }
HoloMap pow(const HoloMap& a, int n) { return HoloMap(npow(a.root_, n)); }
HoloMap sqrt(const HoloMap& a) { return HoloMap(nsqrt(a.root_)); }
HoloMap exp(const HoloMap& a) { return HoloMap(nexp(a.root_)); }

HoloMap HoloMap::reflected() const { return HoloMap(reflect_node(root_)); }

cplx HoloMap::eval(cplx v) const { return eval_node(root_, normalize_imag(v)); }

cplx HoloMap::eval_checked(cplx v, double margin) const {
    if (pole_distance(v) < margin) fail(Err::Pole, "evaluation point within the pole margin");
    if (cut_distance(v) < margin)
        fail(Err::BranchCut, "evaluation point within the branch-cut margin");
    return eval(v);
}

double HoloMap::cut_distance(cplx v) const {
    double best = std::numeric_limits<double>::infinity();
    cut_distance_node(root_, normalize_imag(v), best);
    return best;
}

double HoloMap::pole_distance(cplx v) const {
    double best = std::numeric_limits<double>::infinity();
    pole_distance_node(root_, normalize_imag(v), best);
    return best;
}

HoloMap HoloMap::derivative() const { return HoloMap(deriv_node(root_)); }

bool HoloMap::is_constant(cplx* value) const {
    cplx c;
    if (const_val(root_, c)) {
        if (value) *value = c;
        return true;
    }
    return false;
}

bool HoloMap::is_rational_tree() const { return rational_node(root_); }

std::string HoloMap::str() const {
    std::string out;
    print_node(root_, out, 0, false);
    return out;
}

nlohmann::ordered_json HoloMap::to_json() const { return json_node(root_); }

HoloMap HoloMap::from_json(const nlohmann::json& j) { return HoloMap(node_from_json(j)); }

const char* err_name(Err e) {
    switch (e) {
    case Err::RealInput: return "RealInput";
    case Err::SouthPole: return "SouthPole";
    case Err::Pole: return "Pole";
    case Err::BranchCut: return "BranchCut";
    case Err::OutOfDomain: return "OutOfDomain";
    case Err::SyntaxError: return "SyntaxError";
    case Err::DegenerateUnits: return "DegenerateUnits";
    case Err::NotAStem: return "NotAStem";
    case Err::DomainMismatch: return "DomainMismatch";
    case Err::ZeroNormal: return "ZeroNormal";
    case Err::NotInvertible: return "NotInvertible";
    case Err::DegeneratePlane: return "DegeneratePlane";
    case Err::BranchInconsistent: return "BranchInconsistent";
    case Err::XiSixVanishes: return "XiSixVanishes";
    case Err::NotSliceAffine: return "NotSliceAffine";
    case Err::SingularDifferential: return "SingularDifferential";
    case Err::WrongHalfSpace: return "WrongHalfSpace";
    case Err::TooLarge: return "TooLarge";
    case Err::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

} // namespace slicetw
