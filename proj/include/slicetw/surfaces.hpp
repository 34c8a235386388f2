#pragma once

#include <array>
#include <string>
#include <vector>

#include <json.hpp>

#include "slicetw/holomap.hpp"
#include "slicetw/quaternion.hpp"
#include "slicetw/slice_function.hpp"

namespace slicetw {

/// Homogeneous polynomial in X0..X3 with complex coefficients.
struct HomoPoly {
    struct Term {
        std::array<int, 4> e{};
        cplx coef;
    };

    int degree = 0;
    std::vector<Term> terms;

    static HomoPoly make(int degree, std::vector<Term> terms);

    cplx eval(const std::array<cplx, 4>& X) const;

    nlohmann::ordered_json to_json() const;
    static HomoPoly from_json(const nlohmann::json& j);
};

// --- catalog -----------------------------------------------------------------

HomoPoly quadric_q();                          // X0 X3 - X1 X2
HomoPoly quaddiag(double lambda, double mu, double nu);
HomoPoly quadnondiag(double k);
HomoPoly plane(cplx c0, cplx c1, cplx c2, cplx c3);
HomoPoly plane_pair();                         // X0^2 - X2^2
HomoPoly quadric_cone();                       // X1^2 - X2 X3
HomoPoly cubic_nonnormal1();                   // X0 X3^2 + X1^2 X2
HomoPoly cubic_nonnormal2();                   // X0 X1 X3 + X2 X3^2 + X1^3
HomoPoly cubic_cone(cplx c);
HomoPoly quartic_scroll();
/// by-name factory: quadric_q | quaddiag | quadnondiag | plane | plane_pair |
/// quadric_cone | cubic_nonnormal1 | cubic_nonnormal2 | cubic_cone | quartic_scroll
HomoPoly catalog(const std::string& name, const std::vector<double>& params = {});

// --- membership --------------------------------------------------------------

struct ContainsReport {
    bool contained = false;
    double residual = 0;          // max u-coefficient magnitude, scale-relative
    int samples_used = 0;
    int samples_rejected = 0;     // skipped for branch-cut / pole margin
    bool exact_checked = false;   // rational cross-check ran
    bool exact_zero = false;      // ... and found every coefficient exactly 0
};

/// Substitutes the lift [1, u, g - u hhat, h + u ghat] into P, expands in u at
/// sampled v in the function's domain and reports the largest coefficient.
ContainsReport contains_lift(const HomoPoly& P, const SliceFunction& f, int samples,
                             unsigned long long seed, double tol = 1e-8,
                             double branch_margin = 1e-3);

// --- fibre geometry ----------------------------------------------------------

struct FiberReport {
    bool contained = false;
    int count = 0;                     // distinct intersection points (clusters)
    std::vector<int> multiplicities;   // cluster sizes, descending
    bool tangent = false;              // some cluster of size >= 2
    bool generic = false;              // d simple points
};

/// Restricts P to the fibre over q and counts roots of the binary form,
/// clustering with radius 1e-6 and counting the root at infinity.
FiberReport fiber_cardinality(const HomoPoly& P, const Quaternion& q);

struct ScanCell {
    Quaternion q;
    FiberReport fiber;
};

struct DiscriminantReport {
    std::vector<ScanCell> cells;
    std::string to_csv() const;        // q0,q1,q2,q3,count,flags
};

/// Grid of fibre reports over a box in H. Axis resolutions multiply; the
/// total is guarded by 64^4 (TooLarge).
DiscriminantReport discriminant_scan(const HomoPoly& P, const std::array<double, 8>& box,
                                     const std::array<int, 4>& resolution);

// --- splitting solvers -------------------------------------------------------

/// Plane c0 X0 + c1 X1 + c2 X2 + c3 X3 = 0. With c3 != 0 the free data is
/// (g, hhat); with c3 = 0, c2 != 0 it is (h, ghat).
SliceFunction solve_plane_splitting(cplx c0, cplx c1, cplx c2, cplx c3, const HoloMap& free1,
                                    const HoloMap& free2);

/// Splitting whose lift lies on quaddiag(lambda, mu, nu). sign picks the
/// branch ghat = sign * e^{mu - lambda} v. Throws BranchInconsistent when no
/// sqrt-branch pairing satisfies e^mu g hhat = e^-mu h ghat at a probe point.
SliceFunction solve_quaddiag_splitting(double lambda, double mu, double nu, int sign = +1);

/// Splitting with g = h = 0 and hhat = sqrt(ghat^3 - (c+1) ghat^2 + c ghat),
/// whose lift lies on cubic_cone(c).
SliceFunction solve_cubic_cone_splitting(cplx c, const HoloMap& ghat);

} // namespace slicetw
