#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "field.hpp"

namespace essfield {

struct Orbit {
    double radius = 1.0;
    double angle = 0.0;
    int multiplicity = 1;
};

enum class CenterKind { pole, zero };

struct SymmetrySpec {
    int k = 2;
    Complex center{0.0};
    CenterKind center_kind = CenterKind::pole;
    int nu = 1;
    std::vector<Orbit> zero_orbits;
    std::vector<Orbit> pole_orbits;
    std::vector<Orbit> exp_orbits;
    int exp_center_multiplicity = 0;  // mu
    Complex lambda{1.0};
    Complex c0{1.0};
};

// C + rho e^{i theta} e^{2 pi i l/k}, l = 1..k
inline std::vector<Complex> orbit_points(const SymmetrySpec& sp, const Orbit& o) {
    std::vector<Complex> pts;
    for (int l = 1; l <= sp.k; ++l)
        pts.push_back(sp.center + std::polar(o.radius, o.angle + 2.0 * std::numbers::pi * l / sp.k));
    return pts;
}

inline Signature realized_signature(const SymmetrySpec& sp) {
    Signature sig;
    for (const auto& o : sp.zero_orbits) sig.s += sp.k * o.multiplicity;
    for (const auto& o : sp.pole_orbits) sig.r += sp.k * o.multiplicity;
    for (const auto& o : sp.exp_orbits) sig.d += sp.k * o.multiplicity;
    (sp.center_kind == CenterKind::pole ? sig.r : sig.s) += sp.nu;
    sig.d += sp.exp_center_multiplicity;
    return sig;
}

namespace detail {

inline void reject(const std::string& why) { throw Error(ErrorCode::spec_rejected, why); }

inline RootList orbit_roots(const SymmetrySpec& sp, const std::vector<Orbit>& orbits) {
    RootList out;
    for (const auto& o : orbits)
        for (auto p : orbit_points(sp, o)) out.push_back({p, o.multiplicity});
    return out;
}

inline void check_spec(const SymmetrySpec& sp) {
    const int k = sp.k;
    if (k < 2) reject("k must be at least 2");
    if (sp.nu < 1) reject("center order must be at least 1");
    if (sp.center_kind == CenterKind::pole) {
        if ((sp.nu + 1) % k != 0 || sp.nu % k == 0) reject("pole center needs k | nu+1 and k !| nu");
    } else {
        if ((sp.nu - 1) % k != 0 || sp.nu % k == 0) reject("zero center needs k | nu-1 and k !| nu");
    }
    if (sp.exp_center_multiplicity < 0 || sp.exp_center_multiplicity % k != 0)
        reject("exponent center multiplicity must be a nonnegative multiple of k");
    auto finite = [](Complex v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); };
    if (!finite(sp.center) || !finite(sp.lambda) || !finite(sp.c0)) reject("non-finite spec value");
    for (const auto* list : {&sp.zero_orbits, &sp.pole_orbits, &sp.exp_orbits})
        for (const auto& o : *list)
            if (!(o.radius > 0.0) || !std::isfinite(o.radius) || !std::isfinite(o.angle) || o.multiplicity < 1)
                reject("orbit needs radius > 0 and multiplicity >= 1");
    if (sp.lambda == Complex{0.0}) reject("lambda must be nonzero");
    auto sig = realized_signature(sp);
    if (sig.d >= 1 && sp.c0 == Complex{0.0}) reject("c0 must be nonzero when E is nonconstant");
    if (sig.d % k != 0 || (sig.s - sig.r - 1) % k != 0) reject("k must divide d and s-r-1");
}

} // namespace detail

inline VectorField realize_symmetric(const SymmetrySpec& sp, const Tolerances& tol = {}) {
    detail::check_spec(sp);
    double scale = std::max(1.0, std::abs(sp.center));
    for (const auto* list : {&sp.zero_orbits, &sp.pole_orbits, &sp.exp_orbits})
        for (const auto& o : *list) scale = std::max(scale, std::abs(sp.center) + o.radius);
    double mtol = tol.cluster * scale;

    RootList zeros = detail::orbit_roots(sp, sp.zero_orbits);
    RootList poles = detail::orbit_roots(sp, sp.pole_orbits);
    RootList exps = detail::orbit_roots(sp, sp.exp_orbits);
    (sp.center_kind == CenterKind::pole ? poles : zeros).push_back({sp.center, sp.nu});
    if (sp.exp_center_multiplicity > 0) exps.push_back({sp.center, sp.exp_center_multiplicity});
    zeros = merge_roots(zeros, mtol);
    poles = merge_roots(poles, mtol);
    exps = merge_roots(exps, mtol);
    for (const auto& z : zeros)
        for (const auto& p : poles)
            if (std::abs(z.z - p.z) <= mtol) detail::reject("zero and pole orbits intersect");
    return field_from_roots(sp.lambda, zeros, poles, exps.empty() ? Complex{0.0} : sp.c0, exps);
}

// Simple zeros and poles only.
inline VectorField realize_simple(const SymmetrySpec& sp, const Tolerances& tol = {}) {
    if (sp.nu != 1) detail::reject("simple realization needs a simple center");
    if (sp.center_kind == CenterKind::pole && sp.k != 2) detail::reject("simple pole center forces k = 2");
    for (const auto* list : {&sp.zero_orbits, &sp.pole_orbits})
        for (const auto& o : *list)
            if (o.multiplicity != 1) detail::reject("simple realization needs multiplicity-one orbits");
    VectorField x = realize_symmetric(sp, tol);
    for (const auto* p : {&x.Q, &x.P})
        for (const auto& r : *p->root_view())
            if (r.multiplicity != 1) detail::reject("orbits collide; zeros or poles not simple");
    return x;
}

} // namespace essfield
