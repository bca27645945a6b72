#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "affine.hpp"
#include "errors.hpp"
#include "tolerance.hpp"

namespace essfield {

struct Root {
    Complex z;
    int multiplicity = 1;

    friend bool operator==(const Root&, const Root&) = default;
};

using RootList = std::vector<Root>;

inline int total_multiplicity(const RootList& roots) {
    int n = 0;
    for (const auto& r : roots) n += r.multiplicity;
    return n;
}

inline bool root_less(const Root& x, const Root& y) {
    if (x.z.real() != y.z.real()) return x.z.real() < y.z.real();
    return x.z.imag() < y.z.imag();
}

inline void sort_roots(RootList& roots) { std::sort(roots.begin(), roots.end(), root_less); }

// Points closer than tol (absolute) are merged, multiplicities added.
inline RootList merge_roots(RootList roots, double tol) {
    RootList out;
    for (const auto& r : roots) {
        if (r.multiplicity <= 0) continue;
        auto it = std::find_if(out.begin(), out.end(),
                               [&](const Root& o) { return std::abs(o.z - r.z) <= tol; });
        if (it == out.end())
            out.push_back(r);
        else
            it->multiplicity += r.multiplicity;
    }
    sort_roots(out);
    return out;
}

inline std::vector<Complex> expand_points(const RootList& roots) {
    std::vector<Complex> pts;
    for (const auto& r : roots)
        for (int i = 0; i < r.multiplicity; ++i) pts.push_back(r.z);
    return pts;
}

// Dense polynomial, coefficients stored highest degree first. Optionally
// carries the exact root multiset it was built from.
class Polynomial {
public:
    Polynomial() : c_{Complex{0.0}} {}

    explicit Polynomial(std::vector<Complex> coeffs) : c_(std::move(coeffs)) {
        for (const auto& v : c_)
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                throw Error(ErrorCode::invalid_input, "non-finite polynomial coefficient");
        std::size_t k = 0;
        while (k + 1 < c_.size() && c_[k] == Complex{0.0}) ++k;
        c_.erase(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(k));
        if (c_.empty()) c_.push_back(0.0);
    }

    static Polynomial constant(Complex v) { return Polynomial(std::vector<Complex>{v}); }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.size() == 1 && c_[0] == Complex{0.0}; }
    Complex leading() const { return c_.front(); }
    const std::vector<Complex>& coeffs() const { return c_; }

    // coefficient of z^j
    Complex coeff(int j) const {
        if (j < 0 || j > degree()) return 0.0;
        return c_[static_cast<std::size_t>(degree() - j)];
    }

    const std::optional<RootList>& root_view() const { return roots_; }

    Polynomial without_root_view() const {
        Polynomial p = *this;
        p.roots_.reset();
        return p;
    }

    Polynomial with_root_view(RootList roots) const {
        Polynomial p = *this;
        sort_roots(roots);
        p.roots_ = std::move(roots);
        return p;
    }

    Complex horner(Complex z) const {
        Complex acc = c_[0];
        for (std::size_t i = 1; i < c_.size(); ++i) acc = acc * z + c_[i];
        return acc;
    }

    // Uses the factored form when the root view is known.
    Complex operator()(Complex z) const {
        if (!roots_) return horner(z);
        Complex acc = leading();
        for (const auto& r : *roots_) {
            Complex f = z - r.z;
            for (int i = 0; i < r.multiplicity; ++i) acc *= f;
        }
        return acc;
    }

    Polynomial derivative() const {
        int n = degree();
        if (n == 0) return Polynomial();
        std::vector<Complex> d(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) d[static_cast<std::size_t>(i)] = c_[static_cast<std::size_t>(i)] * double(n - i);
        return Polynomial(std::move(d));
    }

    Polynomial scaled(Complex s) const {
        if (s == Complex{0.0}) return Polynomial();
        Polynomial p = *this;
        for (auto& v : p.c_) v *= s;
        return p;
    }

    Polynomial monic() const {
        if (is_zero()) throw Error(ErrorCode::invalid_input, "zero polynomial has no monic form");
        return scaled(1.0 / leading());
    }

    friend Polynomial operator*(const Polynomial& p, const Polynomial& q) {
        std::vector<Complex> r(p.c_.size() + q.c_.size() - 1, Complex{0.0});
        for (std::size_t i = 0; i < p.c_.size(); ++i)
            for (std::size_t j = 0; j < q.c_.size(); ++j) r[i + j] += p.c_[i] * q.c_[j];
        Polynomial out(std::move(r));
        if (p.roots_ && q.roots_) {
            RootList rs = *p.roots_;
            rs.insert(rs.end(), q.roots_->begin(), q.roots_->end());
            out = out.with_root_view(merge_roots(rs, 0.0));
        }
        return out;
    }

    friend Polynomial operator+(const Polynomial& p, const Polynomial& q) {
        std::size_t n = std::max(p.c_.size(), q.c_.size());
        std::vector<Complex> r(n, Complex{0.0});
        for (std::size_t i = 0; i < p.c_.size(); ++i) r[n - p.c_.size() + i] += p.c_[i];
        for (std::size_t i = 0; i < q.c_.size(); ++i) r[n - q.c_.size() + i] += q.c_[i];
        return Polynomial(std::move(r));
    }

    friend Polynomial operator-(const Polynomial& p, const Polynomial& q) { return p + q.scaled(-1.0); }

private:
    std::vector<Complex> c_;
    std::optional<RootList> roots_;
};

inline Complex evaluate_poly(const Polynomial& p, Complex z) { return p(z); }

inline Polynomial expand_from_roots(Complex leading, RootList roots) {
    if (leading == Complex{0.0}) throw Error(ErrorCode::invalid_input, "zero leading coefficient");
    roots = merge_roots(std::move(roots), 0.0);
    // multiply small factors first
    std::vector<Complex> pts = expand_points(roots);
    std::sort(pts.begin(), pts.end(), [](Complex x, Complex y) {
        if (std::abs(x) != std::abs(y)) return std::abs(x) < std::abs(y);
        return std::arg(x) < std::arg(y);
    });
    std::vector<Complex> c{leading};
    for (Complex r : pts) {
        c.push_back(0.0);
        for (std::size_t i = c.size() - 1; i > 0; --i) c[i] -= r * c[i - 1];
    }
    return Polynomial(std::move(c)).with_root_view(std::move(roots));
}

// result(w) = p(a*w + b)
inline Polynomial affine_substitute(const Polynomial& p, const AffineMap& t) {
    if (t.a == Complex{0.0}) throw Error(ErrorCode::invalid_input, "affine map with a = 0");
    const auto& c = p.coeffs();
    std::vector<Complex> acc{c[0]};
    for (std::size_t i = 1; i < c.size(); ++i) {
        std::vector<Complex> next(acc.size() + 1, Complex{0.0});
        for (std::size_t j = 0; j < acc.size(); ++j) {
            next[j] += acc[j] * t.a;
            next[j + 1] += acc[j] * t.b;
        }
        next.back() += c[i];
        acc = std::move(next);
    }
    Polynomial out(std::move(acc));
    if (p.root_view()) {
        RootList mapped;
        for (const auto& r : *p.root_view()) mapped.push_back({(r.z - t.b) / t.a, r.multiplicity});
        out = out.with_root_view(std::move(mapped));
    }
    return out;
}

class RootFindingError : public Error {
public:
    RootFindingError(const std::string& what, std::vector<Complex> partial)
        : Error(ErrorCode::numeric_failure, what), partial_(std::move(partial)) {}
    const std::vector<Complex>& partial() const { return partial_; }

private:
    std::vector<Complex> partial_;
};

namespace detail {

struct HornerEval {
    Complex p;
    Complex dp;
    double bound;
};

inline HornerEval horner2(const std::vector<Complex>& a, Complex z) {
    Complex p = a[0], dp = 0.0;
    double b = std::abs(a[0]), az = std::abs(z);
    for (std::size_t i = 1; i < a.size(); ++i) {
        dp = dp * z + p;
        p = p * z + a[i];
        b = b * az + std::abs(a[i]);
    }
    return {p, dp, b};
}

inline std::vector<Complex> derivative_coeffs(std::vector<Complex> a, int times) {
    for (int t = 0; t < times && a.size() > 1; ++t) {
        std::size_t n = a.size() - 1;
        std::vector<Complex> d(n);
        for (std::size_t i = 0; i < n; ++i) d[i] = a[i] * double(n - i);
        a = std::move(d);
    }
    return a;
}

// Taylor shift: coefficients of p(u + c).
inline std::vector<Complex> shift_coeffs(std::vector<Complex> a, Complex c) {
    std::size_t n = a.size();
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t j = 1; j < n - i; ++j) a[j] += c * a[j - 1];
    return a;
}

inline std::vector<Complex> aberth(const std::vector<Complex>& a, int max_iter) {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    const int m = static_cast<int>(a.size()) - 1;
    Complex centroid = -a[1] / (double(m) * a[0]);
    auto q = shift_coeffs(a, centroid);
    double radius = 0.0;
    if (std::abs(q[static_cast<std::size_t>(m)]) > 0.0)
        radius = std::pow(std::abs(q[static_cast<std::size_t>(m)] / q[0]), 1.0 / m);
    if (!(radius > 0.0) || !std::isfinite(radius)) {
        for (int k = 1; k <= m; ++k)
            radius = std::max(radius, std::pow(std::abs(q[static_cast<std::size_t>(k)] / q[0]), 1.0 / k));
    }
    if (!(radius > 0.0) || !std::isfinite(radius)) return std::vector<Complex>(static_cast<std::size_t>(m), centroid);

    std::vector<Complex> z(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j)
        z[static_cast<std::size_t>(j)] =
            centroid + std::polar(radius, 2.0 * std::numbers::pi * j / m + 0.4);

    std::vector<char> done(static_cast<std::size_t>(m), 0);
    for (int iter = 0; iter < max_iter; ++iter) {
        int active = 0;
        for (int i = 0; i < m; ++i) {
            auto ui = static_cast<std::size_t>(i);
            if (done[ui]) continue;
            auto h = horner2(a, z[ui]);
            if (std::abs(h.p) <= 4.0 * eps * m * h.bound) {
                done[ui] = 1;
                continue;
            }
            Complex s = 0.0;
            for (int j = 0; j < m; ++j) {
                if (j == i) continue;
                Complex d = z[ui] - z[static_cast<std::size_t>(j)];
                if (d != Complex{0.0}) s += 1.0 / d;
            }
            Complex w;
            if (h.dp == Complex{0.0}) {
                w = Complex(radius * 1e-3, radius * 1e-3);
            } else {
                Complex ratio = h.p / h.dp;
                Complex den = 1.0 - ratio * s;
                w = den == Complex{0.0} ? ratio : ratio / den;
            }
            z[ui] -= w;
            if (!std::isfinite(z[ui].real()) || !std::isfinite(z[ui].imag()))
                throw RootFindingError("root iteration diverged", z);
            if (std::abs(w) <= eps * std::abs(z[ui])) done[ui] = 1;
            ++active;
        }
        if (active == 0) return z;
    }
    if (std::all_of(done.begin(), done.end(), [](char c) { return c != 0; })) return z;
    throw RootFindingError("root finding did not converge", z);
}

// A high-multiplicity root splits into a ring of radius ~ eps^(1/m), wider than
// any inclusion disk. Merge a group with its n nearest groups when every
// derivative below the combined multiplicity vanishes at the refined centroid
// to rounding level.
inline bool numerically_multiple(const std::vector<Complex>& a, Complex& c, int mult) {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    const int deg = static_cast<int>(a.size()) - 1;
    if (mult > deg) return false;
    auto top = derivative_coeffs(a, mult - 1);
    for (int it = 0; it < 6; ++it) {
        auto h = horner2(top, c);
        if (h.dp == Complex{0.0}) break;
        c -= h.p / h.dp;
    }
    for (int j = 0; j < mult; ++j) {
        auto h = horner2(derivative_coeffs(a, j), c);
        if (!(std::abs(h.p) <= 64.0 * eps * deg * h.bound)) return false;
    }
    return true;
}

inline RootList merge_multiple(const std::vector<Complex>& a, const std::vector<Complex>& raw, RootList groups,
                               double tol_abs) {
    groups = merge_roots(std::move(groups), tol_abs);
    if (groups.size() < 2) return groups;
    double scale = 1.0;
    for (auto v : raw) scale = std::max(scale, std::abs(v));
    const double reach = 0.25 * scale;
    for (bool merged = true; merged;) {
        merged = false;
        for (std::size_t g = 0; g < groups.size() && !merged; ++g) {
            std::vector<std::size_t> order;
            for (std::size_t h = 0; h < groups.size(); ++h)
                if (h != g && std::abs(groups[h].z - groups[g].z) <= reach) order.push_back(h);
            std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
                return std::abs(groups[x].z - groups[g].z) < std::abs(groups[y].z - groups[g].z);
            });
            Complex sum = double(groups[g].multiplicity) * groups[g].z;
            int mult = groups[g].multiplicity;
            for (std::size_t n = 0; n < order.size(); ++n) {
                sum += double(groups[order[n]].multiplicity) * groups[order[n]].z;
                mult += groups[order[n]].multiplicity;
                Complex c = sum / double(mult);
                if (!numerically_multiple(a, c, mult)) continue;
                std::vector<char> drop(groups.size(), 0);
                drop[g] = 1;
                for (std::size_t i = 0; i <= n; ++i) drop[order[i]] = 1;
                RootList next;
                for (std::size_t i = 0; i < groups.size(); ++i)
                    if (!drop[i]) next.push_back(groups[i]);
                next.push_back({c, mult});
                groups = std::move(next);
                merged = true;
                break;
            }
        }
    }
    return groups;
}

inline RootList cluster_roots(const std::vector<Complex>& a, const std::vector<Complex>& z, double tol_abs) {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    const std::size_t m = z.size();
    std::vector<std::size_t> parent(m);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) {
            double d = std::abs(z[i] - z[j]);
            if (d <= tol_abs) parent[find(i)] = find(j);
        }

    RootList out;
    std::vector<std::vector<std::size_t>> groups(m);
    for (std::size_t i = 0; i < m; ++i) groups[find(i)].push_back(i);
    for (const auto& g : groups) {
        if (g.empty()) continue;
        Complex c = 0.0;
        for (auto i : g) c += z[i];
        c /= double(g.size());
        double spread = 0.0;
        for (auto i : g) spread = std::max(spread, std::abs(z[i] - c));
        int mult = static_cast<int>(g.size());
        auto d = derivative_coeffs(a, mult - 1);
        Complex x = c;
        double best = std::abs(horner2(d, x).p);
        for (int it = 0; it < 8 && best > 0.0; ++it) {
            auto h = horner2(d, x);
            if (h.dp == Complex{0.0}) break;
            Complex nx = x - h.p / h.dp;
            double v = std::abs(horner2(d, nx).p);
            if (!(v < best) || std::abs(nx - c) > 2.0 * spread + 16.0 * eps * (1.0 + std::abs(c))) break;
            x = nx;
            best = v;
        }
        out.push_back({x, mult});
    }
    return merge_multiple(a, z, std::move(out), tol_abs);
}

} // namespace detail

// Numeric root finding (Aberth-Ehrlich with multiplicity clustering).
inline RootList solve_roots(const Polynomial& p, const Tolerances& tol = {}, int max_iter = 200) {
    if (p.is_zero()) throw Error(ErrorCode::invalid_input, "roots of the zero polynomial");
    const auto& c = p.coeffs();
    const int n = p.degree();
    if (n == 0) return {};
    int zeros = 0;
    while (zeros < n && c[static_cast<std::size_t>(n - zeros)] == Complex{0.0}) ++zeros;
    RootList out;
    if (zeros > 0) out.push_back({0.0, zeros});
    if (n - zeros >= 1) {
        std::vector<Complex> a(c.begin(), c.end() - zeros);
        std::vector<Complex> z;
        if (a.size() == 2)
            z = {-a[1] / a[0]};
        else
            z = detail::aberth(a, max_iter);
        double scale = 1.0;
        for (auto v : z) scale = std::max(scale, std::abs(v));
        auto cl = detail::cluster_roots(a, z, tol.cluster * scale);
        out.insert(out.end(), cl.begin(), cl.end());
    }
    double scale = 1.0;
    for (auto& r : out) scale = std::max(scale, std::abs(r.z));
    return merge_roots(std::move(out), tol.cluster * scale);
}

// Cached root view if present, otherwise numeric.
inline RootList find_roots(const Polynomial& p, const Tolerances& tol = {}) {
    if (p.root_view()) return *p.root_view();
    return solve_roots(p, tol);
}

} // namespace essfield
