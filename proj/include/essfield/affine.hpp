#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include "errors.hpp"

namespace essfield {

using Complex = std::complex<double>;

// T(w) = a*w + b with a != 0.
struct AffineMap {
    Complex a{1.0};
    Complex b{0.0};

    Complex operator()(Complex w) const { return a * w + b; }

    AffineMap inverse() const {
        if (a == Complex{0.0}) throw Error(ErrorCode::invalid_input, "affine map with a = 0");
        return {1.0 / a, -b / a};
    }

    static AffineMap identity() { return {}; }

    // Rotation by 2*pi/k about c.
    static AffineMap rotation(int k, Complex c) {
        Complex w = std::polar(1.0, 2.0 * std::numbers::pi / k);
        return {w, c - w * c};
    }
};

// (t o s)(w) = t(s(w))
inline AffineMap compose(const AffineMap& t, const AffineMap& s) {
    return {t.a * s.a, t.a * s.b + t.b};
}

} // namespace essfield
