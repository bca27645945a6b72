#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <string_view>
#include <vector>

#include "field.hpp"

namespace essfield {

enum class GaugeKind { exp_centered, zero_centered, pole_centered };

inline std::string_view to_string(GaugeKind g) {
    switch (g) {
    case GaugeKind::exp_centered: return "exp";
    case GaugeKind::zero_centered: return "zero";
    case GaugeKind::pole_centered: return "pole";
    }
    return "?";
}

// In priority order. E(0,0,0) and E(0,0,1) fall back to a degenerate exp gauge.
inline std::vector<GaugeKind> available_gauges(Signature sig) {
    std::vector<GaugeKind> out;
    if (sig.d >= 2) out.push_back(GaugeKind::exp_centered);
    if (sig.s >= 1) out.push_back(GaugeKind::zero_centered);
    if (sig.r >= 1) out.push_back(GaugeKind::pole_centered);
    if (out.empty()) out.push_back(GaugeKind::exp_centered);
    return out;
}

struct CanonicalForm {
    VectorField field;
    AffineMap gauge;  // field = pullback(X, gauge)
    GaugeKind kind = GaugeKind::exp_centered;
};

struct MetricForm {
    VectorField field;  // lambda real positive
    AffineMap gauge;    // pullback(X, gauge) = exp(i theta) * field
    GaugeKind kind = GaugeKind::exp_centered;
    double theta = 0.0;
};

namespace detail {

inline std::vector<Complex> nth_roots(Complex v, int n) {
    std::vector<Complex> out;
    Complex p = std::polar(std::pow(std::abs(v), 1.0 / n), std::arg(v) / n);
    for (int j = 0; j < n; ++j) out.push_back(p * std::polar(1.0, 2.0 * std::numbers::pi * j / n));
    return out;
}

inline Polynomial set_coeff(const Polynomial& p, int power, Complex v) {
    auto c = p.coeffs();
    c[static_cast<std::size_t>(p.degree() - power)] = v;
    Polynomial out(std::move(c));
    if (p.root_view() && power < p.degree()) out = out.with_root_view(*p.root_view());
    return out;
}

inline std::vector<Complex> form_key(const VectorField& f, bool metric) {
    std::vector<Complex> k{metric ? Complex(std::abs(f.lambda)) : f.lambda};
    for (const auto* p : {&f.Q, &f.P, &f.E})
        for (std::size_t i = 1; i < p->coeffs().size(); ++i) k.push_back(p->coeffs()[i]);
    return k;
}

inline bool tolerant_less(const std::vector<Complex>& x, const std::vector<Complex>& y, double tie) {
    for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i)
        for (int part = 0; part < 2; ++part) {
            double u = part == 0 ? x[i].real() : x[i].imag();
            double v = part == 0 ? y[i].real() : y[i].imag();
            if (std::abs(u - v) <= tie * (1.0 + std::max(std::abs(u), std::abs(v)))) continue;
            return u < v;
        }
    return false;
}

inline bool keys_close(const std::vector<Complex>& x, const std::vector<Complex>& y, double rel) {
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (std::abs(x[i] - y[i]) > rel * std::max({1.0, std::abs(x[i]), std::abs(y[i])})) return false;
    return true;
}

inline bool gauge_available(Signature sig, GaugeKind kind) {
    for (auto g : available_gauges(sig))
        if (g == kind) return true;
    return false;
}

inline CanonicalForm finish(const VectorField& x, const AffineMap& g, GaugeKind kind, Signature sig) {
    VectorField f = pullback(x, g);
    if (sig.d >= 1) {
        Complex c = f.E.coeff(0);
        f.lambda *= std::exp(c);
        f.E = set_coeff(f.E, 0, 0.0).without_root_view();
        f.E = set_coeff(f.E, sig.d, 1.0);
        if (kind == GaugeKind::exp_centered && sig.d >= 2) f.E = set_coeff(f.E, sig.d - 1, 0.0);
    }
    if (kind == GaugeKind::zero_centered) f.Q = set_coeff(f.Q, sig.s - 1, 0.0);
    if (kind == GaugeKind::pole_centered) f.P = set_coeff(f.P, sig.r - 1, 0.0);
    if ((sig.d == 0 && sig.s - sig.r - 1 != 0) || (sig.s == 0 && sig.r == 0 && sig.d <= 1)) f.lambda = 1.0;
    if (!std::isfinite(f.lambda.real()) || !std::isfinite(f.lambda.imag()))
        throw Error(ErrorCode::range, "normalized lambda overflows");
    return {f, g, kind};
}

inline std::vector<AffineMap> gauge_candidates(const VectorField& x, GaugeKind kind, const Tolerances& tol) {
    auto sig = x.signature();
    const int m = sig.s - sig.r - 1;
    std::vector<AffineMap> out;
    if (kind == GaugeKind::exp_centered && sig.d <= 1) {
        if (sig.d == 0) return {AffineMap{x.lambda, 0.0}};
        Complex c0 = x.E.leading();
        Complex a = 1.0 / c0;
        Complex b = (-std::log(x.lambda / a) - x.E.coeff(0)) / c0;
        return {AffineMap{a, b}};
    }
    Complex b;
    if (kind == GaugeKind::exp_centered)
        b = -x.E.coeff(sig.d - 1) / (double(sig.d) * x.E.leading());
    else if (kind == GaugeKind::zero_centered)
        b = -x.Q.coeff(sig.s - 1) / double(sig.s);
    else
        b = -x.P.coeff(sig.r - 1) / double(sig.r);

    std::vector<Complex> scalings;
    if (sig.d >= 1) {
        scalings = nth_roots(1.0 / x.E.leading(), sig.d);
    } else if (m > 0) {
        scalings = nth_roots(1.0 / x.lambda, m);
    } else if (m < 0) {
        scalings = nth_roots(x.lambda, -m);
    } else {
        AffineMap shift{1.0, b};
        auto pick = [&](const Polynomial& p, bool centered) -> std::optional<std::pair<int, Complex>> {
            Polynomial pb = affine_substitute(p, shift);
            double scale = 0.0;
            for (auto v : pb.coeffs()) scale = std::max(scale, std::abs(v));
            for (int j = centered ? 2 : 1; j <= pb.degree(); ++j) {
                Complex alpha = pb.coeff(pb.degree() - j);
                if (std::abs(alpha) > tol.tie * std::max(1.0, scale)) return std::make_pair(j, alpha);
            }
            return std::nullopt;
        };
        auto hit = pick(x.Q, kind == GaugeKind::zero_centered);
        if (!hit) hit = pick(x.P, kind == GaugeKind::pole_centered);
        scalings = hit ? nth_roots(hit->second, hit->first) : std::vector<Complex>{1.0};
    }
    for (auto a : scalings) out.push_back({a, b});
    return out;
}

inline CanonicalForm select_form(const VectorField& x, GaugeKind kind, bool metric, const Tolerances& tol) {
    auto sig = x.signature();
    if (!gauge_available(sig, kind))
        throw Error(ErrorCode::unsupported_gauge, std::string(to_string(kind)) + " gauge unavailable for this signature");
    if (x.lambda == Complex{0.0}) throw Error(ErrorCode::invalid_field, "lambda is zero");
    std::optional<CanonicalForm> best;
    std::vector<Complex> best_key;
    for (const auto& g : gauge_candidates(x, kind, tol)) {
        auto cand = finish(x, g, kind, sig);
        auto key = form_key(cand.field, metric);
        if (!best || tolerant_less(key, best_key, tol.tie)) {
            best = cand;
            best_key = std::move(key);
        }
    }
    return *best;
}

} // namespace detail

inline CanonicalForm canonical_form(const VectorField& x, GaugeKind kind, const Tolerances& tol = {}) {
    return detail::select_form(x, kind, false, tol);
}

inline CanonicalForm canonical_form(const VectorField& x, const Tolerances& tol = {}) {
    return canonical_form(x, available_gauges(x.signature()).front(), tol);
}

inline MetricForm canonical_metric_form(const VectorField& x, GaugeKind kind, const Tolerances& tol = {}) {
    auto cf = detail::select_form(x, kind, true, tol);
    MetricForm mf{cf.field, cf.gauge, cf.kind, std::arg(cf.field.lambda)};
    mf.field.lambda = std::abs(cf.field.lambda);
    return mf;
}

inline MetricForm canonical_metric_form(const VectorField& x, const Tolerances& tol = {}) {
    return canonical_metric_form(x, available_gauges(x.signature()).front(), tol);
}

enum class EquivalenceMode { analytic, metric };

struct Equivalence {
    AffineMap map;       // X2 = exp(i theta) * pullback(X1, map)
    double theta = 0.0;  // always 0 in analytic mode
};

inline std::optional<Equivalence> are_equivalent(const VectorField& x1, const VectorField& x2,
                                                 EquivalenceMode mode = EquivalenceMode::analytic,
                                                 const Tolerances& tol = {}) {
    auto sig = x1.signature();
    if (!(sig == x2.signature())) return std::nullopt;
    GaugeKind kind = available_gauges(sig).front();
    if (mode == EquivalenceMode::analytic) {
        auto f1 = canonical_form(x1, kind, tol), f2 = canonical_form(x2, kind, tol);
        if (!detail::keys_close(detail::form_key(f1.field, false), detail::form_key(f2.field, false), tol.equivalence))
            return std::nullopt;
        return Equivalence{compose(f1.gauge, f2.gauge.inverse()), 0.0};
    }
    auto m1 = canonical_metric_form(x1, kind, tol), m2 = canonical_metric_form(x2, kind, tol);
    if (!detail::keys_close(detail::form_key(m1.field, false), detail::form_key(m2.field, false), tol.equivalence))
        return std::nullopt;
    double th = std::remainder(m2.theta - m1.theta, 2.0 * std::numbers::pi);
    return Equivalence{compose(m1.gauge, m2.gauge.inverse()), th};
}

} // namespace essfield
