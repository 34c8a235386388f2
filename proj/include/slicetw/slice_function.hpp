#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>

#include <json.hpp>

#include "slicetw/holomap.hpp"
#include "slicetw/quaternion.hpp"
#include "slicetw/sampling.hpp"

namespace slicetw {

/// One component of the splitting quadruple: an expression tree when the
/// function is expression-built, otherwise a bare evaluable closure.
class SliceSlot {
public:
    SliceSlot() : SliceSlot(HoloMap::constant(0.0)) {}
    SliceSlot(HoloMap m);                             // NOLINT(google-explicit-constructor)
    SliceSlot(std::function<cplx(cplx)> fn);          // NOLINT(google-explicit-constructor)

    cplx operator()(cplx v) const { return fn_(v); }
    bool has_tree() const { return tree_.has_value(); }
    const HoloMap& tree() const;
    /// exact derivative for trees, central finite difference otherwise
    SliceSlot derivative() const;

private:
    std::optional<HoloMap> tree_;
    std::function<cplx(cplx)> fn_;
};

/// finite-difference step used whenever a closure has to be differentiated
inline constexpr double kFdStep = 1e-5;

/// Slice function on a circular domain without real points, represented by
/// its splitting quadruple (g, ghat, h, hhat) of holomorphic maps on D+.
/// On C_i+ the value at v is g(v) + h(v) j; the value at alpha - i beta is
/// conj(ghat(v)) + conj(hhat(v)) j with v = alpha + i beta.
class SliceFunction {
public:
    SliceFunction() = default;
    SliceFunction(SliceSlot g, SliceSlot ghat, SliceSlot h, SliceSlot hhat, Region domain = {});

    static SliceFunction identity();
    static SliceFunction constant(Quaternion q);
    /// x |-> x * a + b with quaternionic right coefficients
    static SliceFunction affine(Quaternion a, Quaternion b);

    const SliceSlot& g() const { return g_; }
    const SliceSlot& ghat() const { return ghat_; }
    const SliceSlot& h() const { return h_; }
    const SliceSlot& hhat() const { return hhat_; }
    const Region& domain() const { return domain_; }
    bool expression_built() const;

    /// value g(v) + h(v) j on C_i+
    Quaternion on_plus(cplx v) const;
    /// value at alpha - i beta, read through v = alpha + i beta
    Quaternion on_minus(cplx v) const;

    /// Representation formula with J = i. Throws RealInput within 1e-12 of R.
    Quaternion eval(Quaternion x) const;
    /// General two-slice representation formula; DegenerateUnits when J = K.
    Quaternion eval_repr(Quaternion x, ImaginaryUnit J, ImaginaryUnit K) const;

    /// slice derivative df/dx (componentwise derivative of the quadruple)
    SliceFunction derivative() const;
    /// spherical derivative at a point: (1/2) Im(x)^{-1} (f(x) - f(x^c))
    Quaternion spherical_derivative(Quaternion x) const;
    /// spherical derivative as a slice function (stem F2(z)/Im z)
    SliceFunction spherical_derivative_fn() const;

    SliceFunction conjugate() const;
    SliceFunction normal() const;
    /// Slice reciprocal; evaluation throws ZeroNormal on V(N(f)).
    SliceFunction reciprocal() const;

    nlohmann::ordered_json to_json() const;
    static SliceFunction from_json(const nlohmann::json& j);

private:
    SliceSlot g_, ghat_, h_, hhat_;
    Region domain_;
    std::function<double(cplx)> zero_normal_guard_;
    friend SliceFunction slice_product(const SliceFunction& f, const SliceFunction& g);
};

SliceFunction slice_product(const SliceFunction& f, const SliceFunction& g);

/// Stem pair F = F1 + sqrt(-1) F2 on a domain symmetric about R.
struct StemPair {
    std::function<Quaternion(cplx)> F1, F2;
};

StemPair to_stem(const SliceFunction& f);

/// Stem components given channelwise: quaternion component k of F1 at z is
/// Re(f1[k](z)), and likewise for F2.
StemPair stem_from_channels(const std::array<HoloMap, 4>& f1, const std::array<HoloMap, 4>& f2);

/// Builds the induced slice function after checking the parity condition
/// (F1 even, F2 odd in beta) on random samples. Throws NotAStem on failure.
SliceFunction from_stem(const StemPair& F, Region domain = {}, unsigned long long seed = 1,
                        int samples = 64, double tol = 1e-8);

struct SlicenessReport {
    bool slice = false;
    double residual = 0;
};

/// Tests whether a pointwise-defined function on H \ R is a slice function:
/// reconstructs the candidate stem from its values on C_J and C_K and checks
/// both the stem parity and that the candidate reproduces the function on
/// slices other than J and K.
SlicenessReport check_sliceness(const std::function<Quaternion(Quaternion)>& f, ImaginaryUnit J,
                                ImaginaryUnit K, unsigned long long seed = 1, int samples = 200,
                                double tol = 1e-10);

enum class FunctionClass { Constant, SliceConstant, SliceAffine, Neither };

struct ConstantAffineReport {
    FunctionClass kind = FunctionClass::Neither;
    // first-order coefficients against the basis x(1 -+ Ii)/2, constant part
    // against (1 -+ Ii); q1_minus pairs with x(1 - Ii)/2, q0_minus with 1 - Ii.
    Quaternion q1_plus, q1_minus, q0_plus, q0_minus;
    bool extends_to_r = false;
};

ConstantAffineReport classify_constant_affine(const SliceFunction& f, unsigned long long seed = 1,
                                              int samples = 48, double tol = 1e-9);

bool is_real_slice(const SliceFunction& f, unsigned long long seed = 1, int samples = 64,
                   double tol = 1e-9);
bool extends_to_r(const SliceFunction& f, unsigned long long seed = 1, int samples = 64,
                  double tol = 1e-8);

/// max Cauchy-Riemann residual of the inducing stem, by central differences
double check_regular(const StemPair& F, Region domain = {}, unsigned long long seed = 1,
                     int samples = 64, double step = kFdStep);
double check_regular(const SliceFunction& f, unsigned long long seed = 1, int samples = 64);

} // namespace slicetw
