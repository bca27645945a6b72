#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "affine.hpp"
#include "errors.hpp"
#include "poly.hpp"
#include "tolerance.hpp"

namespace essfield {

struct Signature {
    int s = 0;
    int r = 0;
    int d = 0;

    friend bool operator==(const Signature&, const Signature&) = default;
};

// X = lambda * Q/P * exp(E) d/dz, Q and P monic, E of degree d (zero polynomial when d = 0).
struct VectorField {
    Complex lambda{1.0};
    Polynomial Q = Polynomial::constant(1.0);
    Polynomial P = Polynomial::constant(1.0);
    Polynomial E;

    Signature signature() const { return {Q.degree(), P.degree(), E.degree()}; }
    Complex c0() const { return E.degree() >= 1 ? E.leading() : Complex{0.0}; }
};

// Folds leading coefficients of Q, P and a constant E into lambda.
inline VectorField make_field(Complex lambda, Polynomial Q, Polynomial P, Polynomial E = {}) {
    if (Q.is_zero() || P.is_zero()) throw Error(ErrorCode::invalid_input, "Q and P must be nonzero");
    VectorField x;
    x.lambda = lambda * Q.leading() / P.leading();
    x.Q = Q.monic();
    x.P = P.monic();
    if (E.degree() == 0) {
        x.lambda *= std::exp(E.leading());
        x.E = Polynomial();
    } else {
        x.E = std::move(E);
    }
    return x;
}

inline VectorField field_from_roots(Complex lambda, RootList zeros, RootList poles, Complex c0 = 0.0,
                                    RootList exp_roots = {}) {
    Polynomial E;
    if (!exp_roots.empty()) {
        if (c0 == Complex{0.0}) throw Error(ErrorCode::invalid_input, "E roots given with c0 = 0");
        E = expand_from_roots(c0, std::move(exp_roots));
    }
    return make_field(lambda, expand_from_roots(1.0, std::move(zeros)), expand_from_roots(1.0, std::move(poles)),
                      std::move(E));
}

struct Divisor {
    RootList zeros;
    RootList poles;
    RootList exp_roots;
};

inline Divisor divisor_of(const VectorField& x, const Tolerances& tol = {}) {
    Divisor dv{find_roots(x.Q, tol), find_roots(x.P, tol), {}};
    if (x.E.degree() >= 1) dv.exp_roots = find_roots(x.E, tol);
    double scale = 1.0;
    for (const auto* part : {&dv.zeros, &dv.poles})
        for (const auto& r : *part) scale = std::max(scale, std::abs(r.z));
    for (const auto& zq : dv.zeros)
        for (const auto& zp : dv.poles)
            if (std::abs(zq.z - zp.z) <= tol.cluster * scale)
                throw Error(ErrorCode::invalid_field, "zero and pole coincide");
    return dv;
}

inline void check_pole_distance(const Polynomial& P, Complex z, const Tolerances& tol) {
    if (P.degree() == 0) return;
    if (P.root_view()) {
        for (const auto& r : *P.root_view())
            if (std::abs(z - r.z) <= tol.pole) throw Error(ErrorCode::pole_evaluation, "evaluation at a pole");
        return;
    }
    Complex v = P.horner(z);
    if (v == Complex{0.0}) throw Error(ErrorCode::pole_evaluation, "evaluation at a pole");
    Complex dv = P.derivative().horner(z);
    if (dv != Complex{0.0} && P.degree() * std::abs(v / dv) <= tol.pole)
        throw Error(ErrorCode::pole_evaluation, "evaluation at a pole");
}

inline Complex exp_guarded(Complex e, const Tolerances& tol) {
    if (!std::isfinite(e.real()) || std::abs(e.real()) > tol.exp_overflow)
        throw Error(ErrorCode::range, "|Re E| exceeds the overflow guard");
    return std::exp(e);
}

inline Complex evaluate_field(const VectorField& x, Complex z, const Tolerances& tol = {}) {
    check_pole_distance(x.P, z, tol);
    Complex e = exp_guarded(x.E(z), tol);
    return x.lambda * x.Q(z) / x.P(z) * e;
}

// (T*X)(w) = X(T(w)) / a
inline VectorField pullback(const VectorField& x, const AffineMap& t) {
    if (t.a == Complex{0.0}) throw Error(ErrorCode::invalid_input, "affine map with a = 0");
    auto sig = x.signature();
    VectorField y;
    y.lambda = x.lambda * std::pow(t.a, sig.s - sig.r - 1);
    y.Q = affine_substitute(x.Q, t).monic();
    y.P = affine_substitute(x.P, t).monic();
    y.E = sig.d >= 1 ? affine_substitute(x.E, t) : Polynomial();
    return y;
}

struct Diagnostic {
    std::string code;
    std::string message;
};

inline std::vector<Diagnostic> validate(const VectorField& x, const Tolerances& tol = {}) {
    std::vector<Diagnostic> out;
    auto finite = [](Complex v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); };
    if (!finite(x.lambda))
        out.push_back({"non_finite", "lambda is not finite"});
    else if (x.lambda == Complex{0.0})
        out.push_back({"degenerate_lambda", "lambda is zero"});
    if (x.Q.is_zero() || x.P.is_zero()) {
        out.push_back({"zero_polynomial", "Q and P must be nonzero"});
        return out;
    }
    if (std::abs(x.Q.leading() - 1.0) > 1e-12 || std::abs(x.P.leading() - 1.0) > 1e-12)
        out.push_back({"non_monic", "Q and P must be monic"});
    if (x.E.degree() == 0 && !x.E.is_zero())
        out.push_back({"constant_exponent", "a constant E belongs in lambda"});
    try {
        divisor_of(x, tol);
    } catch (const Error& e) {
        out.push_back({e.code() == ErrorCode::invalid_field ? "zero_pole_collision" : "divisor_failure", e.what()});
    }
    return out;
}

} // namespace essfield
