// One PASS/FAIL line per acceptance criterion; exit status is the number of failures.

#include <cstdio>
#include <set>
#include <string>
#include <vector>

#include <essfield/essfield.hpp>

#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace essfield;
using testsupport::Rng;

namespace {

int failures = 0;

void report(int n, bool ok, const std::string& detail) {
    std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", n, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

double rel(Complex a, Complex b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

RootList ring(int k, double radius, double phase, int m) {
    RootList out;
    for (int j = 0; j < k; ++j) out.push_back({std::polar(radius, phase + 2 * M_PI * j / k), m});
    return out;
}

RootList join(std::initializer_list<RootList> parts) {
    RootList out;
    for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    return out;
}

VectorField septic() { return field_from_roots(1.0, join({{{0.0, 4}}, ring(3, 1, 0, 1)}), {}); }

void criterion1() {
    struct Case {
        const char* name;
        VectorField x;
        int order;
    };
    const double cube3 = std::cbrt(1.0 / 3);
    std::vector<Case> cases{
        {"-e^{z^3}/(3z^2)", field_from_roots(-1.0 / 3, {}, {{0.0, 2}}, 1.0, {{0.0, 3}}), 3},
        {"e^{z^3}/(3z^3-1)", field_from_roots(1.0 / 3, {}, ring(3, cube3, 0, 1), 1.0, {{0.0, 3}}), 1},
        {"e^{z^2}/(z(z^2+1))", field_from_roots(1.0, {}, join({{{0.0, 1}}, ring(2, 1, M_PI / 2, 1)}), 1.0, {{0.0, 2}}), 2},
        {"z^35/(z^4-1) e^{z^30}", field_from_roots(1.0, {{0.0, 35}}, ring(4, 1, 0, 1), 1.0, {{0.0, 30}}), 2},
        {"(z^5-1)^7/z^4 e^{z^30}", field_from_roots(1.0, ring(5, 1, 0, 7), {{0.0, 4}}, 1.0, {{0.0, 30}}), 5},
        {"z^4(z^3-1)", septic(), 3},
        {"1/(z(z^2-1))", field_from_roots(1.0, {}, join({{{0.0, 1}}, ring(2, 1, 0, 1)})), 2},
        {"1/(z(z^2-1)(z^2+4))", field_from_roots(1.0, {}, join({{{0.0, 1}}, ring(2, 1, 0, 1), ring(2, 2, M_PI / 2, 1)})), 2},
        {"1/(z^3(z^4-1)^2(z^4-16))", field_from_roots(Complex(0.7, 0.2), {}, join({{{0.0, 3}}, ring(4, 1, 0, 2), ring(4, 2, 0, 1)})), 4},
        {"1/(z^2(z^3-1)(z^3+8)^2)", field_from_roots(Complex(-1.3, 0.4), {}, join({{{0.0, 2}}, ring(3, 1, 0, 1), ring(3, 2, M_PI / 3, 2)})), 3},
        {"1/(z^3(z^4-1)(z^4+16))", field_from_roots(2.0, {}, join({{{0.0, 3}}, ring(4, 1, 0, 1), ring(4, 2, M_PI / 4, 1)})), 4},
    };
    int ok = 0;
    std::string bad;
    for (const auto& c : cases) {
        auto iso = isotropy_group(c.x);
        bool good = iso.order == c.order &&
                    (c.order == 1 ? iso.kind == IsotropyKind::trivial
                                  : iso.kind == IsotropyKind::cyclic && iso.center && std::abs(*iso.center) < 1e-9);
        if (good)
            ++ok;
        else
            bad += std::string(" ") + c.name + "->" + std::to_string(iso.order);
    }
    report(1, ok == int(cases.size()), std::to_string(ok) + "/" + std::to_string(cases.size()) + " reference isotropy examples" + bad);
}

void criterion2() {
    std::vector<std::string> bad;
    if (!family_report(11, 7, 6).all_trivial) bad.push_back("(11,7,6)");
    for (int d = 1; d <= 12; ++d)
        if (!family_report(0, 0, d).all_trivial) bad.push_back("(0,0," + std::to_string(d) + ")");
    if (family_report(35, 4, 30).admissible_orders != std::vector<int>{2, 5}) bad.push_back("(35,4,30) orders");
    for (int r = 0; r <= 30; ++r)
        if (family_report(0, r, 0).all_trivial != oracle::is_prime(r + 1)) bad.push_back("E(0," + std::to_string(r) + ",0)");
    for (int s = 3; s <= 30; ++s)
        if (family_report(s, 0, 0).all_trivial != oracle::is_prime(s - 1)) bad.push_back("E(" + std::to_string(s) + ",0,0)");
    std::string detail = "family predicates";
    for (auto& b : bad) detail += " " + b;
    report(2, bad.empty(), detail);
}

void criterion3() {
    Rng g(1003);
    double worst = 0;
    int points = 0;
    for (int t = 0; t < 200; ++t) {
        auto rf = testsupport::random_field(g, 5);
        auto S = testsupport::random_affine(g), T = testsupport::random_affine(g);
        auto lhs = pullback(pullback(rf.field, T), S);
        auto rhs = pullback(rf.field, compose(T, S));
        int n = 0;
        while (n < 20) {
            Complex z = testsupport::in_disc(g, 2.0);
            try {
                Complex a = evaluate_field(lhs, z), b = evaluate_field(rhs, z);
                worst = std::max(worst, rel(a, b));
                ++n;
            } catch (const Error&) {
            }
        }
        points += n;
    }
    char buf[128];
    std::snprintf(buf, sizeof buf, "200 instances, %d points, max relative error %.3g (< 1e-9)", points, worst);
    report(3, worst < 1e-9, buf);
}

double coeff_rel(Complex a, Complex b) { return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}); }

void criterion4() {
    Rng g(1004);
    double worst = 0;
    int mismatched = 0;
    for (int t = 0; t < 100; ++t) {
        auto rf = testsupport::random_field(g);
        auto T = testsupport::random_affine(g);
        auto a = canonical_form(rf.field).field, b = canonical_form(pullback(rf.field, T)).field;
        if (!(a.signature() == b.signature())) {
            ++mismatched;
            continue;
        }
        worst = std::max(worst, coeff_rel(a.lambda, b.lambda));
        for (const auto& pr : {std::pair{&a.Q, &b.Q}, {&a.P, &b.P}, {&a.E, &b.E}}) {
            if (pr.first->coeffs().size() != pr.second->coeffs().size()) {
                ++mismatched;
                break;
            }
            for (std::size_t i = 0; i < pr.first->coeffs().size(); ++i)
                worst = std::max(worst, coeff_rel(pr.first->coeffs()[i], pr.second->coeffs()[i]));
        }
    }
    char buf[128];
    std::snprintf(buf, sizeof buf, "100 instances, max coefficient deviation %.3g (< 1e-6), %d shape mismatches", worst,
                  mismatched);
    report(4, worst < 1e-6 && mismatched == 0, buf);
}

std::vector<SymmetrySpec> round_trip_specs() {
    Rng g(1005);
    std::vector<SymmetrySpec> out;
    for (int t = 0; t < 200; ++t) out.push_back(testsupport::random_spec(g, 24));
    return out;
}

void criterion5(const std::vector<SymmetrySpec>& specs) {
    int ok = 0;
    for (const auto& sp : specs) {
        try {
            auto iso = isotropy_group(realize_symmetric(sp));
            // a continuous rotation group contains every Z_k
            if ((iso.kind == IsotropyKind::cyclic && iso.order % sp.k == 0) || iso.kind == IsotropyKind::continuous) ++ok;
        } catch (const Error&) {
        }
    }
    report(5, ok == int(specs.size()), std::to_string(ok) + "/" + std::to_string(specs.size()) + " realized specs detected with k | order");
}

void expect_coeffs(const Polynomial& p, std::vector<Complex> want, double& worst, bool& shape) {
    if (p.coeffs().size() != want.size()) {
        shape = false;
        return;
    }
    for (std::size_t i = 0; i < want.size(); ++i) worst = std::max(worst, std::abs(p.coeffs()[i] - want[i]));
}

void criterion6(const std::vector<SymmetrySpec>& specs) {
    Rng g(1006);
    double residual = 0;
    int sig_bad = 0, failed = 0;
    for (const auto& sp : specs) {
        try {
            auto x = realize_symmetric(sp);
            auto q = isotropy_group(x).kind == IsotropyKind::continuous ? quotient_field(x, sp.k) : quotient_field(x);
            const int k = q.k;
            const Complex c = q.center;
            auto sig = x.signature(), qs = q.field.signature();
            bool pole_center = false;
            for (const auto& r : divisor_of(x).poles)
                if (std::abs(r.z - c) < 1e-9) pole_center = true;
            Signature want = pole_center ? Signature{sig.s / k, (sig.r + 1) / k - 1, sig.d / k}
                                         : Signature{(sig.s - 1) / k + 1, sig.r / k, sig.d / k};
            if (!(qs == want)) ++sig_bad;
            Complex gen = std::polar(1.0, 2 * M_PI / k);
            int n = 0;
            while (n < 20) {
                Complex z = c + testsupport::in_disc(g, 1.3);
                try {
                    if (std::abs(x.E(z).real()) > 100) continue;
                    Complex z2 = c + gen * (z - c);
                    Complex a = double(k) * std::pow(z - c, k - 1) * evaluate_field(x, z);
                    Complex b = double(k) * std::pow(z2 - c, k - 1) * evaluate_field(x, z2);
                    residual = std::max(residual, rel(a, b));
                    ++n;
                } catch (const Error&) {
                }
            }
        } catch (const Error&) {
            ++failed;
        }
    }
    // worked examples against closed forms
    double worst = 0;
    bool shape = true;
    auto q1 = quotient_field(field_from_roots(-1.0 / 3, {}, {{0.0, 2}}, 1.0, {{0.0, 3}}));
    worst = std::max(worst, std::abs(q1.field.lambda + 1.0));
    expect_coeffs(q1.field.Q, {1.0}, worst, shape);
    expect_coeffs(q1.field.P, {1.0}, worst, shape);
    expect_coeffs(q1.field.E, {1.0, 0.0}, worst, shape);
    shape = shape && q1.k == 3;
    auto q2 = quotient_field(field_from_roots(1.0, {}, join({{{0.0, 1}}, ring(2, 1, M_PI / 2, 1)}), 1.0, {{0.0, 2}}));
    worst = std::max(worst, std::abs(q2.field.lambda - 2.0));
    expect_coeffs(q2.field.Q, {1.0}, worst, shape);
    expect_coeffs(q2.field.P, {1.0, 1.0}, worst, shape);
    expect_coeffs(q2.field.E, {1.0, 0.0}, worst, shape);
    shape = shape && q2.k == 2;
    auto q3 = quotient_field(septic());
    worst = std::max(worst, std::abs(q3.field.lambda - 3.0));
    expect_coeffs(q3.field.Q, {1.0, -1.0, 0.0, 0.0}, worst, shape);
    expect_coeffs(q3.field.P, {1.0}, worst, shape);
    shape = shape && q3.k == 3;
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "residual %.3g (< 1e-9), %d signature mismatches, %d failures, worked examples %.3g (< 1e-8)%s",
                  residual, sig_bad, failed, worst, shape ? "" : " shape mismatch");
    report(6, residual < 1e-9 && sig_bad == 0 && failed == 0 && worst < 1e-8 && shape, buf);
}

void criterion7() {
    Rng g(1007);
    double ident = 0;
    for (int t = 0; t < 100; ++t) {
        auto rf = testsupport::random_field(g);
        int n = 0;
        while (n < 20) {
            Complex z = testsupport::in_disc(g, 2.0);
            try {
                ident = std::max(ident, std::abs(one_form(rf.field, z) * evaluate_field(rf.field, z) - 1.0));
                ++n;
            } catch (const Error&) {
            }
        }
    }
    // residues at simple zeros against P(q) e^{-E(q)} / (lambda Q'(q)) from the raw roots
    double res = 0;
    int checked = 0;
    for (int t = 0; t < 40; ++t) {
        auto rf = testsupport::random_field(g, 4, 1.2);
        for (const auto& e : residues(rf.field)) {
            Complex dq = 1.0, p = 1.0, ex = 0.0;
            bool skipped = false;
            for (const auto& r : rf.zeros) {
                if (!skipped && std::abs(r.z - e.location) < 1e-9) {
                    skipped = true;
                    continue;
                }
                dq *= e.location - r.z;
            }
            for (const auto& r : rf.poles) p *= e.location - r.z;
            if (!rf.exp_roots.empty()) {
                ex = rf.c0;
                for (const auto& r : rf.exp_roots) ex *= e.location - r.z;
            }
            res = std::max(res, rel(e.residue, p * std::exp(-ex) / (rf.lambda * dq)));
            ++checked;
        }
    }
    auto psi = [](double z) { return 1 / (3 * z * z * z) + std::log(z * z * z - 1) / 3 - std::log(z); };
    double pe = std::abs(distinguished_parameter(septic(), {{2.0, 3.0}}) - (psi(3) - psi(2)));
    char buf[200];
    std::snprintf(buf, sizeof buf, "omega(X)-1 %.3g (< 1e-12), residues %.3g over %d (< 1e-6), Psi septic %.3g (< 1e-8)",
                  ident, res, checked, pe);
    report(7, ident < 1e-12 && res < 1e-6 && pe < 1e-8 && checked > 0, buf);
}

void criterion8() {
    bool a = is_single_valued(field_from_roots(1.0, {{0.0, 2}}, {}));
    bool b = !is_single_valued(septic());
    Rng g(1008);
    bool c = true;
    for (int r = 1; r <= 8; ++r) {
        auto poles = testsupport::separated_roots(g, r, 1.5, 0.1);
        if (r % 3 == 0) poles[0].multiplicity = 2;
        c = c && is_single_valued(field_from_roots(testsupport::unit_scaled(g, 0.5, 2), {}, poles));
    }
    report(8, a && b && c,
           std::string("z^2 single-valued ") + (a ? "yes" : "NO") + ", septic multivalued " + (b ? "yes" : "NO") +
               ", E(0,r,0) samples single-valued " + (c ? "yes" : "NO"));
}

void criterion9() {
    auto x = field_from_roots(-1.0 / 3, {}, {{0.0, 2}}, 1.0, {{0.0, 3}});
    PortraitConfig cfg;
    auto a = render(x, cfg), b = render(x, cfg);
    bool same = a.bytes == b.bytes;
    const double tol = 10 * cfg.step_tolerance;
    const Complex g = std::polar(1.0, 2 * M_PI / 3);
    auto dir = [&](Complex z) {
        Complex v = evaluate_field(x, z);
        return v / std::abs(v);
    };
    detail::Chart ch(x, cfg, {});
    double worst = 0;
    int lines = 0, bad = 0;
    for (Complex seed : detail::seed_grid(ch, cfg)) {
        if (!ch.inside(seed) || ch.guarded(seed) || !ch.direction(seed)) continue;
        auto s = detail::trace(ch, seed, cfg);
        std::vector<Complex> rotated;
        for (auto p : s.points) rotated.push_back(g * p);
        auto t = streamline(x, g * seed, cfg);
        double h = oracle::hausdorff(oracle::densify(rotated, dir), oracle::densify(t.points, dir));
        worst = std::max(worst, h);
        ++lines;
        if (!(h < tol)) ++bad;
    }
    char buf[200];
    std::snprintf(buf, sizeof buf, "SVG byte-identical %s; %d/%d rotated streamlines within %.0e (max Hausdorff %.3g)",
                  same ? "yes" : "NO", lines - bad, lines, tol, worst);
    report(9, same && bad == 0 && lines > 0, buf);
}

void criterion10() {
    int checked = 0, bad = 0;
    for (int s = 0; s <= 12; ++s)
        for (int r = 0; r <= 12; ++r)
            for (int d = 0; d <= 12; ++d) {
                ++checked;
                if (family_report(s, r, d).moduli_dimension != s + r + d - 1) ++bad;
            }
    for (auto sig : std::vector<Signature>{{11, 7, 6}, {35, 4, 30}, {0, 30, 0}, {30, 0, 0}}) {
        ++checked;
        if (family_report(sig.s, sig.r, sig.d).moduli_dimension != sig.s + sig.r + sig.d - 1) ++bad;
    }
    report(10, bad == 0, std::to_string(checked - bad) + "/" + std::to_string(checked) + " signatures report s+r+d-1");
}

} // namespace

int main() {
    auto guarded = [](int n, auto&& f) {
        try {
            f();
        } catch (const std::exception& e) {
            report(n, false, std::string("exception: ") + e.what());
        }
    };
    auto specs = round_trip_specs();
    guarded(1, criterion1);
    guarded(2, criterion2);
    guarded(3, criterion3);
    guarded(4, criterion4);
    guarded(5, [&] { criterion5(specs); });
    guarded(6, [&] { criterion6(specs); });
    guarded(7, criterion7);
    guarded(8, criterion8);
    guarded(9, criterion9);
    guarded(10, criterion10);
    return failures;
}
