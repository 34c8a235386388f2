#pragma once

#include <complex>
#include <memory>
#include <string>
#include <string_view>

#include <json.hpp>

#include "slicetw/error.hpp"

namespace slicetw {

using cplx = std::complex<double>;

/// Evaluable holomorphic map C -> C given by an expression tree over
/// { complex constant, the variable v, + - * /, integer powers, principal
/// sqrt, exp }. Trees are immutable and cheap to share.
class HoloMap {
public:
    struct Node;
    using NodePtr = std::shared_ptr<const Node>;

    HoloMap() : HoloMap(constant(0.0)) {}

    static HoloMap constant(cplx c);
    static HoloMap var();

    /// Parses the expression grammar: literals "2", "1.5", "2i", variable v,
    /// operators + - * / ^ (integer exponent), sqrt(), exp(), parentheses.
    /// Throws Error(SyntaxError) carrying the byte offset of the problem.
    static HoloMap parse(std::string_view src);

    friend HoloMap operator+(const HoloMap& a, const HoloMap& b);
    friend HoloMap operator-(const HoloMap& a, const HoloMap& b);
    friend HoloMap operator*(const HoloMap& a, const HoloMap& b);
    friend HoloMap operator/(const HoloMap& a, const HoloMap& b);
    friend HoloMap operator-(const HoloMap& a);
    friend HoloMap pow(const HoloMap& a, int n);
    friend HoloMap sqrt(const HoloMap& a);
    friend HoloMap exp(const HoloMap& a);

    /// v |-> conj(this(conj(v))); holomorphic, stays inside the grammar.
    HoloMap reflected() const;

    /// Throws Error(Pole) on an exact zero divisor. Imaginary parts equal to
    /// -0.0 are normalized to +0.0 before any branch decision.
    cplx eval(cplx v) const;

    /// eval that additionally refuses points whose sqrt radicands come within
    /// margin of the cut (BranchCut) or whose divisors come within margin of
    /// zero (Pole)
    cplx eval_checked(cplx v, double margin) const;

    /// Distance from the nearest sqrt radicand to the cut (-inf, 0], taken
    /// over all sqrt nodes; +inf when the tree has no sqrt. Used to keep
    /// samples away from branch cuts.
    double cut_distance(cplx v) const;

    /// Distance from the nearest divisor to zero; +inf without divisions.
    double pole_distance(cplx v) const;

    /// Exact symbolic derivative; sqrt differentiates with the same branch.
    HoloMap derivative() const;

    bool is_constant(cplx* value = nullptr) const;
    /// True when every constant is a (small-denominator) dyadic rational and
    /// the tree is sqrt- and exp-free, so exact rational evaluation applies.
    bool is_rational_tree() const;

    std::string str() const;
    nlohmann::ordered_json to_json() const;
    static HoloMap from_json(const nlohmann::json& j);

    const NodePtr& root() const { return root_; }

private:
    explicit HoloMap(NodePtr n) : root_(std::move(n)) {}
    NodePtr root_;
};

/// max |a - b| relative helper used across checks
inline double rel_err(cplx a, cplx b) { return std::abs(a - b) / (1.0 + std::abs(b)); }

} // namespace slicetw
