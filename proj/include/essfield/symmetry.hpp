#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <vector>

#include "field.hpp"

namespace essfield {

struct DivisorSet {
    std::vector<int> values;  // ascending; empty when unbounded
    bool unbounded = false;   // d = 0 and s = r + 1
};

// Common divisors of d and s - r - 1, with gcd(0, m) = |m|.
inline DivisorSet common_divisor_set(int s, int r, int d) {
    int g = std::gcd(std::abs(d), std::abs(s - r - 1));
    if (g == 0) return {{}, true};
    DivisorSet out;
    for (int k = 1; k <= g; ++k)
        if (g % k == 0) out.values.push_back(k);
    return out;
}

struct Barycenters {
    std::optional<Complex> zeros;
    std::optional<Complex> poles;
    std::optional<Complex> exp_roots;
};

inline std::optional<Complex> barycenter(const RootList& roots) {
    if (roots.empty()) return std::nullopt;
    Complex acc = 0.0;
    int n = 0;
    for (const auto& r : roots) {
        acc += double(r.multiplicity) * r.z;
        n += r.multiplicity;
    }
    return acc / double(n);
}

inline Barycenters barycenters(const Divisor& dv) {
    return {barycenter(dv.zeros), barycenter(dv.poles), barycenter(dv.exp_roots)};
}

// Is the multiset mapped to itself by rotation by 2*pi/k about c? tol is absolute.
inline bool rotation_invariant(const RootList& roots, Complex c, int k, double tol) {
    if (k < 1) throw Error(ErrorCode::invalid_input, "rotation order must be positive");
    if (k == 1 || roots.empty()) return true;
    RootList order = roots;
    std::sort(order.begin(), order.end(), [&](const Root& x, const Root& y) {
        double rx = std::abs(x.z - c), ry = std::abs(y.z - c);
        if (rx != ry) return rx < ry;
        return std::arg(x.z - c) < std::arg(y.z - c);
    });
    Complex w = std::polar(1.0, 2.0 * std::numbers::pi / k);
    std::vector<char> used(order.size(), 0);
    for (const auto& p : order) {
        Complex img = c + w * (p.z - c);
        std::size_t best = order.size();
        double bd = 0.0;
        for (std::size_t j = 0; j < order.size(); ++j) {
            if (used[j]) continue;
            double d = std::abs(order[j].z - img);
            if (best == order.size() || d < bd) {
                best = j;
                bd = d;
            }
        }
        if (best == order.size() || bd > tol || order[best].multiplicity != p.multiplicity) return false;
        used[best] = 1;
    }
    return true;
}

enum class IsotropyKind { trivial, cyclic, continuous };

struct IsotropyResult {
    IsotropyKind kind = IsotropyKind::trivial;
    int order = 1;  // k for cyclic, 0 for continuous
    std::optional<Complex> center;
    std::optional<AffineMap> generator;
};

inline double divisor_scale(const Divisor& dv) {
    double s = 1.0;
    for (const auto* part : {&dv.zeros, &dv.poles, &dv.exp_roots})
        for (const auto& r : *part) s = std::max(s, std::abs(r.z));
    return s;
}

inline IsotropyResult isotropy_group(const VectorField& x, const Tolerances& tol = {}) {
    auto sig = x.signature();
    auto ds = common_divisor_set(sig.s, sig.r, sig.d);
    if (!ds.unbounded && ds.values.size() <= 1) return {};

    Divisor dv = divisor_of(x, tol);
    double atol = tol.symmetry * divisor_scale(dv);
    auto bc = barycenters(dv);
    std::vector<Complex> cs;
    for (const auto& b : {bc.zeros, bc.poles, bc.exp_roots})
        if (b) cs.push_back(*b);
    if (cs.empty()) return {};
    for (auto v : cs)
        if (std::abs(v - cs.front()) > atol) return {};
    Complex c = cs.front();

    std::vector<int> candidates;
    if (ds.unbounded) {
        bool all_at_center = true;
        for (const auto* part : {&dv.zeros, &dv.poles, &dv.exp_roots})
            for (const auto& r : *part)
                if (std::abs(r.z - c) > atol) all_at_center = false;
        if (all_at_center) return {IsotropyKind::continuous, 0, c, std::nullopt};
        for (int k = sig.s + sig.r; k >= 2; --k) candidates.push_back(k);
    } else {
        for (auto it = ds.values.rbegin(); it != ds.values.rend(); ++it)
            if (*it > 1) candidates.push_back(*it);
    }
    for (int k : candidates) {
        if (rotation_invariant(dv.zeros, c, k, atol) && rotation_invariant(dv.poles, c, k, atol) &&
            rotation_invariant(dv.exp_roots, c, k, atol))
            return {IsotropyKind::cyclic, k, c, AffineMap::rotation(k, c)};
    }
    return {};
}

struct FamilyReport {
    bool all_trivial = true;
    int moduli_dimension = 0;
    std::vector<int> admissible_orders;
    std::vector<int> common_divisors;
    bool unbounded = false;
};

inline bool is_prime(int n) {
    if (n < 2) return false;
    for (int p = 2; p * p <= n; ++p)
        if (n % p == 0) return false;
    return true;
}

inline FamilyReport family_report(int s, int r, int d) {
    if (s < 0 || r < 0 || d < 0) throw Error(ErrorCode::invalid_input, "negative signature entry");
    FamilyReport rep;
    rep.moduli_dimension = s + r + d - 1;
    auto ds = common_divisor_set(s, r, d);
    rep.common_divisors = ds.values;
    rep.unbounded = ds.unbounded;
    if (!ds.unbounded)
        for (int k : ds.values) {
            if (k == 1) continue;
            bool ks = s % k == 0, kr = r % k == 0;
            if (ks != kr) rep.admissible_orders.push_back(k);
        }
    if (d == 0 && s == 0)
        rep.all_trivial = is_prime(r + 1);
    else if (d == 0 && r == 0 && s >= 3)
        rep.all_trivial = is_prime(s - 1);
    else if (ds.unbounded)
        rep.all_trivial = false;
    else
        rep.all_trivial = rep.admissible_orders.empty();
    return rep;
}

} // namespace essfield
