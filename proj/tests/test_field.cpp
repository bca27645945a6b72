#include <gtest/gtest.h>

#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace essfield;
using testsupport::Rng;

namespace {

VectorField z3_example() { return field_from_roots(-1.0 / 3.0, {}, {{0.0, 2}}, 1.0, {{0.0, 3}}); }

VectorField exp_z() { return make_field(1.0, Polynomial::constant(1.0), Polynomial::constant(1.0), Polynomial({1.0, 0.0})); }

std::vector<oracle::Pt> pts(const RootList& r) {
    std::vector<oracle::Pt> out;
    for (const auto& x : r) out.push_back({x.z, x.multiplicity});
    return out;
}

double rel(Complex a, Complex b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

} // namespace

TEST(Field, EvaluateExamples) {
    EXPECT_EQ(evaluate_field(exp_z(), 0.0), Complex(1.0));
    EXPECT_LT(std::abs(evaluate_field(z3_example(), 1.0) - Complex(-std::exp(1.0) / 3.0)), 1e-15);
    auto x = field_from_roots(1.0, {{0.0, 4}, {1.0, 1}, {std::polar(1.0, 2 * M_PI / 3), 1}, {std::polar(1.0, -2 * M_PI / 3), 1}}, {});
    EXPECT_EQ(evaluate_field(x, 1.0), Complex(0.0));
}

TEST(Field, EvaluateAtPoleRejected) {
    try {
        evaluate_field(z3_example(), 0.0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::pole_evaluation);
    }
    // coefficient-only P
    auto x = make_field(1.0, Polynomial::constant(1.0), Polynomial({1.0, -2.0}));
    EXPECT_THROW(evaluate_field(x, 2.0), Error);
}

TEST(Field, OverflowIsRangeError) {
    try {
        evaluate_field(exp_z(), 800.0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::range);
    }
}

TEST(Field, DivisorExamples) {
    auto dv = divisor_of(z3_example());
    EXPECT_TRUE(dv.zeros.empty());
    ASSERT_EQ(dv.poles.size(), 1u);
    EXPECT_EQ(dv.poles[0].multiplicity, 2);
    ASSERT_EQ(dv.exp_roots.size(), 1u);
    EXPECT_EQ(dv.exp_roots[0].multiplicity, 3);

    // e^{z^3}/(3z^3-1) from coefficients
    auto y = make_field(1.0, Polynomial::constant(1.0), Polynomial({3.0, 0.0, 0.0, -1.0}),
                        Polynomial({1.0, 0.0, 0.0, 0.0}));
    auto d2 = divisor_of(y);
    ASSERT_EQ(d2.poles.size(), 3u);
    for (const auto& p : d2.poles) EXPECT_NEAR(std::abs(p.z), std::pow(3.0, -1.0 / 3.0), 1e-14);
    EXPECT_NEAR(y.lambda.real(), 1.0 / 3.0, 1e-16);

    auto e = divisor_of(exp_z());
    EXPECT_TRUE(e.zeros.empty());
    EXPECT_TRUE(e.poles.empty());
    ASSERT_EQ(e.exp_roots.size(), 1u);
    EXPECT_EQ(e.exp_roots[0].z, Complex(0.0));
}

TEST(Field, PullbackExamples) {
    auto x = z3_example();
    auto same = pullback(x, AffineMap::identity());
    EXPECT_EQ(same.lambda, x.lambda);

    auto y = pullback(exp_z(), {2.0, 0.0});
    EXPECT_LT(std::abs(y.lambda - 0.5), 1e-16);
    EXPECT_LT(std::abs(y.E.coeff(1) - 2.0), 1e-16);

    auto r = pullback(x, AffineMap::rotation(3, 0.0));
    EXPECT_LT(std::abs(r.lambda - x.lambda), 1e-15);
    for (int j = 0; j <= 3; ++j) EXPECT_LT(std::abs(r.E.coeff(j) - x.E.coeff(j)), 1e-15);
}

TEST(Field, ValidateDiagnostics) {
    EXPECT_TRUE(validate(z3_example()).empty());
    auto clash = field_from_roots(1.0, {{0.0, 1}}, {{0.0, 1}});
    auto d = validate(clash);
    ASSERT_EQ(d.size(), 1u);
    EXPECT_EQ(d[0].code, "zero_pole_collision");
    auto zero_lambda = z3_example();
    zero_lambda.lambda = 0.0;
    d = validate(zero_lambda);
    ASSERT_EQ(d.size(), 1u);
    EXPECT_EQ(d[0].code, "degenerate_lambda");
}

TEST(FieldProperty, ValuesMatchIndependentProductForm) {
    Rng g(21);
    for (int t = 0; t < 100; ++t) {
        auto rf = testsupport::random_field(g);
        for (int k = 0; k < 10; ++k) {
            Complex z = testsupport::in_disc(g, 2.0);
            Complex want = oracle::field_value(rf.lambda, pts(rf.zeros), pts(rf.poles), rf.c0, pts(rf.exp_roots), z);
            EXPECT_LT(rel(evaluate_field(rf.field, z), want), 1e-12);
        }
    }
}

TEST(FieldProperty, PullbackValueLaw) {
    Rng g(22);
    for (int t = 0; t < 100; ++t) {
        auto rf = testsupport::random_field(g);
        auto T = testsupport::random_affine(g);
        auto y = pullback(rf.field, T);
        for (int k = 0; k < 20;) {
            Complex w = testsupport::in_disc(g, 2.0);
            Complex got;
            try {
                got = evaluate_field(y, w);
            } catch (const Error&) {
                continue;  // overflow guard or too close to a pole
            }
            Complex want = oracle::field_value(rf.lambda, pts(rf.zeros), pts(rf.poles), rf.c0, pts(rf.exp_roots), T(w)) / T.a;
            EXPECT_LT(rel(got, want), 1e-10);
            ++k;
        }
    }
}

TEST(FieldProperty, GroupActionLaw) {
    Rng g(23);
    for (int t = 0; t < 100; ++t) {
        auto rf = testsupport::random_field(g);
        auto T = testsupport::random_affine(g), S = testsupport::random_affine(g);
        auto lhs = pullback(pullback(rf.field, T), S);
        auto rhs = pullback(rf.field, compose(T, S));
        for (int k = 0; k < 20;) {
            Complex w = testsupport::in_disc(g, 2.0);
            try {
                EXPECT_LT(rel(evaluate_field(lhs, w), evaluate_field(rhs, w)), 1e-9);
                ++k;
            } catch (const Error&) {
            }
        }
    }
}

TEST(FieldProperty, DivisorTransportsByInverseMap) {
    Rng g(24);
    for (int t = 0; t < 100; ++t) {
        auto rf = testsupport::random_field(g);
        auto T = testsupport::random_affine(g);
        // strip root views so the numeric path is exercised
        VectorField y = pullback(rf.field, T);
        y.Q = y.Q.without_root_view();
        y.P = y.P.without_root_view();
        y.E = y.E.without_root_view();
        auto dv = divisor_of(y);
        auto check = [&](const RootList& got, const RootList& orig) {
            ASSERT_EQ(total_multiplicity(got), total_multiplicity(orig));
            for (const auto& o : orig) {
                Complex img = (o.z - T.b) / T.a;
                double best = 1e300;
                for (const auto& r : got) best = std::min(best, std::abs(r.z - img));
                EXPECT_LT(best, 1e-7 * std::max(1.0, std::abs(img)));
            }
        };
        check(dv.zeros, rf.zeros);
        check(dv.poles, rf.poles);
        check(dv.exp_roots, rf.exp_roots);
    }
}
