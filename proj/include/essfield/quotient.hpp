#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <vector>

#include "symmetry.hpp"

namespace essfield {

struct OrbitClass {
    Complex representative;  // one orbit member
    Complex image;           // (p - C)^k averaged over the orbit
    int multiplicity = 1;
};

struct OrbitDecomposition {
    Complex center{0.0};
    int k = 1;
    int center_zero = 0;  // order of Q at C
    int center_pole = 0;  // order of P at C
    int center_exp = 0;   // order of E at C
    std::vector<OrbitClass> zero_orbits;
    std::vector<OrbitClass> pole_orbits;
    std::vector<OrbitClass> exp_orbits;
};

namespace detail {

inline std::vector<OrbitClass> split_orbits(const RootList& roots, Complex c, int k, double tol, int& at_center) {
    at_center = 0;
    std::vector<OrbitClass> out;
    std::vector<char> used(roots.size(), 0);
    Complex w = std::polar(1.0, 2.0 * std::numbers::pi / k);
    for (std::size_t i = 0; i < roots.size(); ++i) {
        if (used[i]) continue;
        used[i] = 1;
        if (std::abs(roots[i].z - c) <= tol) {
            at_center += roots[i].multiplicity;
            continue;
        }
        Complex img = std::pow(roots[i].z - c, k);
        Complex cur = roots[i].z;
        Complex rep = cur;
        auto phase = [&](Complex p) {
            double a = std::arg(p - c);
            return a < 0 ? a + 2.0 * std::numbers::pi : a;
        };
        for (int step = 1; step < k; ++step) {
            cur = c + w * (cur - c);
            std::size_t best = roots.size();
            double bd = 0.0;
            for (std::size_t j = 0; j < roots.size(); ++j) {
                if (used[j]) continue;
                double d = std::abs(roots[j].z - cur);
                if (best == roots.size() || d < bd) {
                    best = j;
                    bd = d;
                }
            }
            if (best == roots.size() || bd > tol || roots[best].multiplicity != roots[i].multiplicity)
                throw Error(ErrorCode::not_symmetric, "divisor is not invariant under the rotation");
            used[best] = 1;
            img += std::pow(roots[best].z - c, k);
            if (phase(roots[best].z) < phase(rep)) rep = roots[best].z;
        }
        out.push_back({rep, img / double(k), roots[i].multiplicity});
    }
    return out;
}

} // namespace detail

inline OrbitDecomposition orbit_decomposition(const Divisor& dv, Complex c, int k, double tol) {
    if (k < 1) throw Error(ErrorCode::invalid_input, "k must be positive");
    OrbitDecomposition od;
    od.center = c;
    od.k = k;
    od.zero_orbits = detail::split_orbits(dv.zeros, c, k, tol, od.center_zero);
    od.pole_orbits = detail::split_orbits(dv.poles, c, k, tol, od.center_pole);
    od.exp_orbits = detail::split_orbits(dv.exp_roots, c, k, tol, od.center_exp);
    return od;
}

struct QuotientResult {
    VectorField field;  // Y on the w = (z - C)^k plane
    int k = 1;
    Complex center{0.0};
};

// Pushforward under w = (z - C)^k, for a detected nontrivial cyclic isotropy.
namespace detail {

inline QuotientResult quotient_by(const VectorField& x, int k, Complex c, const Tolerances& tol) {
    Divisor dv = divisor_of(x, tol);
    auto od = orbit_decomposition(dv, c, k, tol.symmetry * divisor_scale(dv));

    // Y(w) = k (z - C)^{k-1} X(z): order at w = 0 is (k - 1 + ord_C X)/k
    int ord = k - 1 + od.center_zero - od.center_pole;
    if (ord % k != 0 || od.center_exp % k != 0)
        throw Error(ErrorCode::not_symmetric, "center orders incompatible with the rotation");
    ord /= k;

    RootList zeros, poles, exps;
    for (const auto& o : od.zero_orbits) zeros.push_back({o.image, o.multiplicity});
    for (const auto& o : od.pole_orbits) poles.push_back({o.image, o.multiplicity});
    for (const auto& o : od.exp_orbits) exps.push_back({o.image, o.multiplicity});
    if (ord > 0) zeros.push_back({0.0, ord});
    if (ord < 0) poles.push_back({0.0, -ord});
    if (od.center_exp > 0) exps.push_back({0.0, od.center_exp / k});

    QuotientResult res;
    res.k = k;
    res.center = c;
    res.field = field_from_roots(double(k) * x.lambda, zeros, poles, exps.empty() ? Complex{0.0} : x.c0(), exps);
    return res;
}

} // namespace detail

// Quotient by the full detected rotation group.
inline QuotientResult quotient_field(const VectorField& x, const Tolerances& tol = {}) {
    auto iso = isotropy_group(x, tol);
    if (iso.kind != IsotropyKind::cyclic) throw Error(ErrorCode::no_symmetry, "field has no finite cyclic isotropy");
    return detail::quotient_by(x, iso.order, *iso.center, tol);
}

// Quotient by the subgroup Z_k; needs k | order, or continuous isotropy.
inline QuotientResult quotient_field(const VectorField& x, int k, const Tolerances& tol = {}) {
    if (k < 1) throw Error(ErrorCode::invalid_input, "k must be positive");
    auto iso = isotropy_group(x, tol);
    bool ok = (iso.kind == IsotropyKind::cyclic && iso.order % k == 0) || iso.kind == IsotropyKind::continuous;
    if (!ok || !iso.center) throw Error(ErrorCode::no_symmetry, "Z_" + std::to_string(k) + " is not in the isotropy group");
    return detail::quotient_by(x, k, *iso.center, tol);
}

enum class GermKind { pole, linear, zero, zero_with_residue, exp };

struct Germ {
    GermKind kind = GermKind::zero;
    int order = 1;          // nu for pole/zero, d for exp
    Complex lambda{1.0};    // linear and zero_with_residue coefficient
};

struct GermQuotient {
    Germ germ;
    std::optional<double> normalization;  // table constant over literal pushforward constant
};

inline GermQuotient germ_quotient(const Germ& g, int k) {
    if (k < 1) throw Error(ErrorCode::invalid_germ, "k must be positive");
    auto bad = [] { throw Error(ErrorCode::invalid_germ, "order not compatible with k"); };
    GermQuotient out;
    out.germ = g;
    switch (g.kind) {
    case GermKind::pole:
        if (g.order < 1 || (g.order + 1) % k != 0) bad();
        out.germ.order = (g.order + 1) / k - 1;
        out.normalization = 1.0 / k;
        break;
    case GermKind::zero:
        if (g.order < 1 || (g.order - 1) % k != 0) bad();
        if (g.order == 2 && k != 1) bad();
        out.germ.order = (g.order - 1) / k + 1;
        out.normalization = 1.0 / k;
        break;
    case GermKind::zero_with_residue:
        if (g.order < 3 || (g.order - 1) % k != 0) bad();
        if (k != 1) bad();
        out.normalization = 1.0;
        break;
    case GermKind::linear:
        if (g.lambda == Complex{0.0}) bad();
        out.germ.lambda = g.lambda / double(k);
        out.normalization = 1.0 / (double(k) * k);
        break;
    case GermKind::exp:
        if (g.order < 1 || g.order % k != 0) bad();
        out.germ.order = g.order / k;
        break;
    }
    return out;
}

} // namespace essfield
