#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace heatshift;
using fixtures::pi;

TEST(Shifts, ProductLinearUnitSlope) {
    const auto t = compute_moment_table(fixtures::product_linear(2, 1.0), 2);
    const auto s = derive_shifts(t, 0);
    ASSERT_EQ(s.lambda_k.size(), 1u);
    const auto& x = s.x_star.at({0, 0});
    EXPECT_NEAR(x[0], 0.5, 1e-15);
    EXPECT_NEAR(x[1], 0.5, 1e-15);
    ASSERT_TRUE(s.report.holds);
    EXPECT_NEAR(s.report.c_alpha.at({0, 0}), pi / 8, 1e-14);
    EXPECT_NEAR(s.t_star.at({0, 0}), -0.125, 1e-15);
    EXPECT_LE(s.report.max_offdiag_residual, 1e-14);
    EXPECT_LE(s.report.max_diag_spread, 1e-14);
}

// x*_i = c/2 and t* = -(1 - c^2/2)/4 for every slope c.
TEST(Shifts, ProductLinearFamily) {
    for (int n : {1, 2, 3, 4}) {
        for (double c : {-2.0, -0.5, 0.3, 1.0, 3.0}) {
            const auto t = compute_moment_table(fixtures::product_linear(n, c), 2);
            const auto s = derive_shifts(t, 0);
            ASSERT_TRUE(s.report.holds) << n << " " << c;
            for (double xi : s.x_star.at(MultiIndex::zero(n))) EXPECT_NEAR(xi, c / 2, 1e-14);
            EXPECT_NEAR(s.t_star.at(MultiIndex::zero(n)), -(1 - c * c / 2) / 4, 1e-14);
        }
    }
}

TEST(Shifts, PureGaussian) {
    for (int n : {1, 2, 3}) {
        const auto s = derive_shifts(compute_moment_table(fixtures::gaussian(n), 2), 0);
        EXPECT_NEAR(s.report.c_alpha.at(MultiIndex::zero(n)), std::pow(pi, 0.5 * n) / 4, 1e-13);
        EXPECT_NEAR(s.t_star.at(MultiIndex::zero(n)), -0.25, 1e-15);
    }
}

TEST(Shifts, RadialMatchesIsotropicFormula) {
    // t* = -c_f / (2 M_0), c_f = int x_1^2 f.
    const auto t = compute_moment_table(fixtures::radial(), 2);
    const auto s = derive_shifts(t, 0);
    const double cf = t.at({2, 0});
    EXPECT_NEAR(s.t_star.at({0, 0}), -cf / (2 * t.at({0, 0})), 1e-15);
    EXPECT_NEAR(s.t_star.at({0, 0}), -0.375, 1e-15);
}

TEST(Shifts, FirstOrderDatum) {
    const auto t = compute_moment_table(fixtures::first_order(2), 3);
    EXPECT_TRUE(lambda_set(t, 0).empty());
    EXPECT_EQ(find_min_nondegenerate_order(t, 3), 1);
    const auto s = derive_shifts(t, 1);
    ASSERT_EQ(s.lambda_k, (std::vector<MultiIndex>{{1, 0}}));
    const auto& x = s.x_star.at({1, 0});
    EXPECT_NEAR(x[0], -1.0 / std::sqrt(2.0), 1e-14);
    EXPECT_NEAR(x[1], 0.0, 1e-15);
    ASSERT_TRUE(s.report.holds);
    EXPECT_NEAR(s.t_star.at({1, 0}), 0.0, 1e-14);
}

TEST(Shifts, FirstOrderDatumHigherDimension) {
    const auto s = derive_shifts(compute_moment_table(fixtures::first_order(3), 3), 1);
    ASSERT_EQ(s.lambda_k, (std::vector<MultiIndex>{{1, 0, 0}}));
    EXPECT_TRUE(s.report.holds);
    EXPECT_NEAR(s.x_star.at({1, 0, 0})[0], -1.0 / std::sqrt(2.0), 1e-14);
}

TEST(Shifts, EmptyLambdaCarriesSuggestion) {
    const auto t = compute_moment_table(fixtures::first_order(2), 3);
    try {
        derive_shifts(t, 0);
        FAIL();
    } catch (const EmptyLambdaError& e) {
        EXPECT_EQ(e.order, 0);
        ASSERT_TRUE(e.suggested.has_value());
        EXPECT_EQ(*e.suggested, 1);
    }
    const auto z = compute_moment_table(fixtures::zero(2), 4);
    EXPECT_FALSE(find_min_nondegenerate_order(z, 4).has_value());
    try {
        derive_shifts(z, 0);
        FAIL();
    } catch (const EmptyLambdaError& e) {
        EXPECT_FALSE(e.suggested.has_value());
        EXPECT_NE(std::string(e.what()).find("empty up to k_max"), std::string::npos);
    }
}

TEST(Shifts, AnisotropicDataFailDiagonal) {
    // (1 + x_1^2) e^{-|x|^2}: second moments differ by axis.
    const HermiteGaussianSum f(2, {TensorTerm{{{1.0, 0.0, 1.0}, {1.0}}}});
    const auto s = derive_shifts(compute_moment_table(f, 2), 0);
    EXPECT_FALSE(s.report.holds);
    EXPECT_TRUE(s.t_star.empty());
    ASSERT_FALSE(s.report.violations.empty());
    EXPECT_EQ(s.report.violations.front().kind, "diag");
    EXPECT_GT(s.report.max_diag_spread, 0.1);
    EXPECT_THROW(time_shifts(s.report, compute_moment_table(f, 2), s.lambda_k), ConditionAError);
    EXPECT_THROW(verify_shift_identities(compute_moment_table(f, 2), s), ConditionAError);
}

TEST(Shifts, CorrelatedDataFailOffDiagonal) {
    // (1 + x_1 x_2) e^{-|x|^2}: M_{(1,1)} != 0 while x* = 0.
    const HermiteGaussianSum f(2, {TensorTerm{{{1.0}, {1.0}}}, TensorTerm{{{0.0, 1.0}, {0.0, 1.0}}}});
    const auto s = derive_shifts(compute_moment_table(f, 2), 0);
    EXPECT_FALSE(s.report.holds);
    bool offdiag = false;
    for (const auto& v : s.report.violations) offdiag |= v.kind == "offdiag" && v.i == 0 && v.j == 1;
    EXPECT_TRUE(offdiag);
}

TEST(Shifts, VanishingMomentConditionChecked) {
    // Adding e^{-x_1^2} (x_2^3 - 1.5 x_2) e^{-x_2^2} leaves Lambda_1 = {e_1} but
    // makes M_{(0,3)} nonzero.
    const HermiteGaussianSum f(2, {fixtures::first_order(2).terms[0],
                                   TensorTerm{{{1.0}, {0.0, -1.5, 0.0, 1.0}}}});
    const auto t = compute_moment_table(f, 3);
    EXPECT_NEAR(t.at({0, 1}), 0.0, 1e-14);
    const auto s = derive_shifts(t, 1);
    EXPECT_FALSE(s.report.holds);
    bool vanishing = false;
    for (const auto& v : s.report.violations) vanishing |= v.kind == "vanishing";
    EXPECT_TRUE(vanishing);
}

TEST(Shifts, IdentityScale) {
    EXPECT_EQ(identity_scale(0), 1.0);
    EXPECT_EQ(identity_scale(1), 3.0);
    EXPECT_NEAR(identity_scale(2), (6 + std::sqrt(12.0)) / 2, 1e-15);
}

TEST(Shifts, IdentitiesHoldOnFixtures) {
    {
        const auto t = compute_moment_table(fixtures::product_linear(2, 1.0), 2);
        const auto id = verify_shift_identities(t, derive_shifts(t, 0));
        ASSERT_TRUE(id.variance_residual.has_value());
        EXPECT_LE(*id.variance_residual, 1e-13);
        EXPECT_LE(id.scaled_residual, 1e-13);
        EXPECT_EQ(id.s, 1.0);
    }
    {
        const auto t = compute_moment_table(fixtures::first_order(2), 3);
        const auto id = verify_shift_identities(t, derive_shifts(t, 1));
        EXPECT_FALSE(id.variance_residual.has_value());
        EXPECT_LE(id.scaled_residual, 1e-13);
        EXPECT_EQ(id.s, 3.0);
    }
}

TEST(Shifts, IdentityPropertyOverSlopes) {
    for (int n : {2, 3}) {
        for (double c = -3.0; c <= 3.0; c += 0.37) {
            const auto t = compute_moment_table(fixtures::product_linear(n, c), 2);
            const auto id = verify_shift_identities(t, derive_shifts(t, 0));
            EXPECT_LE(*id.variance_residual, 1e-12 * (1 + t.max_abs()));
            EXPECT_LE(id.scaled_residual, 1e-12 * (1 + t.max_abs()));
        }
    }
}

TEST(Shifts, SampledDataAgreeWithExact) {
    const auto exact = derive_shifts(compute_moment_table(fixtures::product_linear(2, 1.0), 2), 0);
    const auto quad = derive_shifts(compute_moment_table(fixtures::sampled(fixtures::product_linear(2, 1.0)), 2), 0);
    ASSERT_TRUE(quad.report.holds);
    EXPECT_NEAR(quad.t_star.at({0, 0}), exact.t_star.at({0, 0}), 1e-12);
    EXPECT_NEAR(quad.x_star.at({0, 0})[0], 0.5, 1e-12);
}
