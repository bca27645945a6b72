#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "field.hpp"

namespace essfield {

// Coefficient of omega_X = P/(lambda Q) e^{-E} dz.
inline Complex one_form(const VectorField& x, Complex z, const Tolerances& tol = {}) {
    check_pole_distance(x.Q, z, tol);
    Complex e = exp_guarded(-x.E(z), tol);
    return x.P(z) / (x.lambda * x.Q(z)) * e;
}

inline Complex quadratic_differential(const VectorField& x, Complex z, const Tolerances& tol = {}) {
    Complex w = one_form(x, z, tol);
    return w * w;
}

struct ResidueEntry {
    Complex location;
    Complex residue;
    int order = 1;
};

using ResidueReport = std::vector<ResidueEntry>;

namespace detail {

struct ContourResult {
    Complex value;  // (1/2 pi i) loop integral
    double scale;   // max |omega (z - q)| over the nodes
};

// Trapezoid rule on |z - q| = rho, nodes doubled until stable.
inline ContourResult contour_residue(const VectorField& x, Complex q, double rho, const Tolerances& tol) {
    auto sum_nodes = [&](int n, int start, int stride, double& scale) {
        Complex acc = 0.0;
        for (int j = start; j < n; j += stride) {
            Complex u = std::polar(rho, 2.0 * std::numbers::pi * j / n);
            Complex w = one_form(x, q + u, tol) * u;
            scale = std::max(scale, std::abs(w));
            acc += w;
        }
        return acc;
    };
    int n = 64;
    double scale = 0.0;
    Complex total = sum_nodes(n, 0, 1, scale);
    Complex prev = total / double(n);
    while (n < (1 << 16)) {
        total += sum_nodes(2 * n, 1, 2, scale);
        n *= 2;
        Complex cur = total / double(n);
        if (std::abs(cur - prev) < 1e-10 * std::max(1.0, scale)) return {cur, scale};
        prev = cur;
    }
    throw Error(ErrorCode::numeric_failure, "contour quadrature did not converge");
}

// Half the distance to the nearest other zero of Q, shrunk while Re E varies
// by more than 5 on the circle.
inline double residue_radius(const VectorField& x, const RootList& zs, const Root& q) {
    double rho = 0.0;
    for (const auto& o : zs)
        if (&o != &q) rho = rho == 0.0 ? std::abs(o.z - q.z) : std::min(rho, std::abs(o.z - q.z));
    rho = rho == 0.0 ? 1.0 : 0.5 * rho;
    if (x.E.degree() == 0) return rho;
    for (int it = 0; it < 60; ++it) {
        double lo = 1e300, hi = -1e300;
        for (int j = 0; j < 64; ++j) {
            double re = x.E(q.z + std::polar(rho, 2.0 * std::numbers::pi * j / 64)).real();
            lo = std::min(lo, re);
            hi = std::max(hi, re);
        }
        if (hi - lo <= 5.0) break;
        rho *= 0.5;
    }
    return rho;
}

} // namespace detail

inline ResidueReport residues(const VectorField& x, const Tolerances& tol = {}) {
    RootList zs = find_roots(x.Q, tol);
    ResidueReport out;
    for (const auto& q : zs) {
        auto c = detail::contour_residue(x, q.z, detail::residue_radius(x, zs, q), tol);
        out.push_back({q.z, c.value, q.multiplicity});
    }
    return out;
}

// True iff every residue is below 1e-8 relative to the contour scale.
inline bool is_single_valued(const VectorField& x, const Tolerances& tol = {}) {
    RootList zs = find_roots(x.Q, tol);
    for (const auto& q : zs) {
        auto c = detail::contour_residue(x, q.z, detail::residue_radius(x, zs, q), tol);
        if (std::abs(c.value) >= 1e-8 * std::max(1.0, c.scale)) return false;
    }
    return true;
}

struct PathSpec {
    std::vector<Complex> vertices;
    double refinement = 0.1;  // max piece length per quadrature call
};

namespace detail {

inline double segment_distance(Complex a, Complex b, Complex p) {
    Complex ab = b - a;
    double len2 = std::norm(ab);
    double t = len2 == 0.0 ? 0.0 : std::clamp(((p - a) * std::conj(ab)).real() / len2, 0.0, 1.0);
    return std::abs(a + t * ab - p);
}

inline void check_path(const VectorField& x, const PathSpec& path, const Tolerances& tol) {
    if (path.vertices.size() < 2) throw Error(ErrorCode::path_rejected, "path needs at least two vertices");
    if (!(path.refinement > 0.0)) throw Error(ErrorCode::path_rejected, "refinement must be positive");
    for (auto v : path.vertices)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw Error(ErrorCode::path_rejected, "non-finite vertex");
    if (x.Q.degree() == 0) return;
    for (const auto& q : find_roots(x.Q, tol))
        for (std::size_t i = 0; i + 1 < path.vertices.size(); ++i)
            if (segment_distance(path.vertices[i], path.vertices[i + 1], q.z) <= 1e-9 * std::max(1.0, std::abs(q.z)))
                throw Error(ErrorCode::path_rejected, "path passes through a pole of the 1-form");
}

template <class F>
auto integrate_path(const PathSpec& path, F&& f) {
    using boost::math::quadrature::gauss_kronrod;
    using R = decltype(f(Complex{}, Complex{}));
    R total{};
    for (std::size_t i = 0; i + 1 < path.vertices.size(); ++i) {
        Complex a = path.vertices[i], b = path.vertices[i + 1];
        double len = std::abs(b - a);
        if (len == 0.0) continue;
        int pieces = std::max(1, static_cast<int>(std::ceil(len / path.refinement)));
        for (int p = 0; p < pieces; ++p) {
            Complex pa = a + (b - a) * (double(p) / pieces);
            Complex pb = a + (b - a) * (double(p + 1) / pieces);
            Complex dz = pb - pa;
            double err = 0.0;
            R v = gauss_kronrod<double, 15>::integrate([&](double t) { return f(pa + t * dz, dz); }, 0.0, 1.0, 15,
                                                       1e-13, &err);
            double plen = std::abs(dz);
            if (!(err <= std::max(1e-10 * plen, 1e-12 * std::abs(v))))
                throw Error(ErrorCode::numeric_failure, "path quadrature did not reach its error target");
            total += v;
        }
    }
    return total;
}

} // namespace detail

// Psi along the given path (no branch correction).
inline Complex distinguished_parameter(const VectorField& x, const PathSpec& path, const Tolerances& tol = {}) {
    detail::check_path(x, path, tol);
    return detail::integrate_path(path, [&](Complex z, Complex dz) { return one_form(x, z, tol) * dz; });
}

inline double flat_length(const VectorField& x, const PathSpec& path, const Tolerances& tol = {}) {
    detail::check_path(x, path, tol);
    return detail::integrate_path(path, [&](Complex z, Complex dz) { return std::abs(one_form(x, z, tol)) * std::abs(dz); });
}

} // namespace essfield
