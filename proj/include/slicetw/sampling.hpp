#pragma once

#include <random>

#include <json.hpp>

#include "slicetw/quaternion.hpp"

namespace slicetw {

using Rng = std::mt19937_64;

/// Rectangular sampling window for the upper-half-plane variable v.
/// Evaluation itself only insists on Im v > 0; the window steers samplers.
struct Region {
    double re0 = -2.0, re1 = 2.0;
    double im0 = 0.05, im1 = 2.0;

    bool contains(cplx v) const {
        return v.real() >= re0 && v.real() <= re1 && v.imag() >= im0 && v.imag() <= im1;
    }

    /// largest window inside both; empty() when they do not overlap
    Region intersect(const Region& o) const {
        return {std::max(re0, o.re0), std::min(re1, o.re1), std::max(im0, o.im0),
                std::min(im1, o.im1)};
    }
    bool empty() const { return re0 >= re1 || im0 >= im1; }

    cplx sample(Rng& rng) const {
        std::uniform_real_distribution<double> re(re0, re1), im(im0, im1);
        return {re(rng), im(rng)};
    }

    nlohmann::ordered_json to_json() const;
    static Region from_json(const nlohmann::json& j);
};

inline double uniform(Rng& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline cplx sample_cplx(Rng& rng, double lo = -2.0, double hi = 2.0) {
    return {uniform(rng, lo, hi), uniform(rng, lo, hi)};
}

/// Uniform direction on the sphere of imaginary units.
inline ImaginaryUnit sample_unit(Rng& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    while (true) {
        double a = n(rng), b = n(rng), c = n(rng);
        double s = a * a + b * b + c * c;
        if (s > 1e-12) {
            s = std::sqrt(s);
            return {a / s, b / s, c / s};
        }
    }
}

/// Random quaternion with |Im| bounded away from zero.
inline Quaternion sample_quaternion(Rng& rng, double scale = 2.0, double min_im = 0.05) {
    while (true) {
        Quaternion q{uniform(rng, -scale, scale), uniform(rng, -scale, scale),
                     uniform(rng, -scale, scale), uniform(rng, -scale, scale)};
        if (q.im_norm() >= min_im) return q;
    }
}

} // namespace slicetw
