#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace heatshift;
using fixtures::pi;

TEST(Kernels, HermiteRecurrenceMatchesExplicit) {
    for (int j = 0; j <= 6; ++j)
        for (double z : {-2.3, -0.7, 0.0, 0.4, 1.9})
            EXPECT_NEAR(hermite_poly(j, z), fixtures::hermite_explicit(j, z), 1e-10 * (1 + std::abs(fixtures::hermite_explicit(j, z))));
}

TEST(Kernels, HermiteCoefficientsMatchRecurrence) {
    for (int j = 0; j <= 12; ++j) {
        const auto c = hermite_coefficients(j);
        for (double z : {-1.3, 0.2, 0.9})
            EXPECT_NEAR(poly_value(c, z), hermite_poly(j, z), 1e-9 * (1 + std::abs(hermite_poly(j, z))));
    }
}

TEST(Kernels, HeatKernelBasics) {
    const double o[] = {0.0, 0.0};
    EXPECT_NEAR(heat_kernel(o, 2.0), 1.0 / (8 * pi), 1e-16);
    const double x[] = {1.0, -2.0};
    EXPECT_NEAR(heat_kernel(x, 0.5), std::exp(-2.5) / (2 * pi), 1e-16);
    EXPECT_THROW(heat_kernel(x, 0.0), std::domain_error);
    EXPECT_THROW(heat_kernel_derivative({1, 0}, 0, x, -1.0), std::domain_error);
}

TEST(Kernels, FrozenDerivatives) {
    const double x[] = {0.3, -0.7};
    EXPECT_NEAR(heat_kernel_derivative({2, 1}, 0, x, 1.5), fixtures::frozen::dG21, 1e-15);
    EXPECT_NEAR(heat_kernel_derivative({1, 0}, 1, x, 1.5), fixtures::frozen::dtG10, 1e-15);
}

// Each derivative is checked against a central difference of the next lower one,
// so the chain from G itself up to |alpha| = 4, m = 2 is covered.
TEST(Kernels, DerivativesMatchFiniteDifferences) {
    const std::vector<std::vector<double>> points{{0.3, -0.7}, {1.1, 0.4}, {-1.6, 2.2}, {0.0, 0.0}};
    double worst = 0.0;
    for (double t : {0.5, 1.5, 4.0}) {
        const double h = 1e-4 * std::max(1.0, std::sqrt(t));
        for (const auto& a : enumerate_up_to(2, 4)) {
            for (int m = 0; m <= 2; ++m) {
                const double scale = heat_kernel(std::vector<double>{0.0, 0.0}, t) / std::pow(t, 0.5 * a.order() + m);
                for (const auto& p : points) {
                    auto rel = [&](double an, double fd) {
                        return std::abs(an - fd) / std::max({std::abs(an), std::abs(fd), 1e-3 * scale});
                    };
                    if (m > 0) {
                        const double an = heat_kernel_derivative(a, m, p, t);
                        const double fd = (heat_kernel_derivative(a, m - 1, p, t + h) -
                                           heat_kernel_derivative(a, m - 1, p, t - h)) / (2 * h);
                        worst = std::max(worst, rel(an, fd));
                        EXPECT_LE(rel(an, fd), 1e-5) << a << " m=" << m << " t=" << t;
                    }
                    for (int i = 0; i < 2; ++i) {
                        if (a[i] == 0) continue;
                        const MultiIndex lower = [&] {
                            std::vector<int> c(a.components().begin(), a.components().end());
                            --c[static_cast<std::size_t>(i)];
                            return MultiIndex(c);
                        }();
                        auto pp = p, pm = p;
                        pp[static_cast<std::size_t>(i)] += h;
                        pm[static_cast<std::size_t>(i)] -= h;
                        const double an = heat_kernel_derivative(a, m, p, t);
                        const double fd =
                            (heat_kernel_derivative(lower, m, pp, t) - heat_kernel_derivative(lower, m, pm, t)) / (2 * h);
                        EXPECT_LE(rel(an, fd), 1e-5) << a << " m=" << m << " axis " << i;
                    }
                }
            }
        }
    }
    RecordProperty("worst_time_fd_rel", std::to_string(worst));
}

TEST(Kernels, HeatEquationHolds) {
    const std::vector<double> x{0.8, -0.3, 1.2};
    for (const auto& a : enumerate_up_to(3, 2)) {
        double lap = 0.0;
        for (int i = 0; i < 3; ++i) lap += heat_kernel_derivative(a.plus_unit(i, 2), 0, x, 2.0);
        EXPECT_NEAR(heat_kernel_derivative(a, 1, x, 2.0), lap, 1e-15);
    }
}

// ||d_t^m d^alpha G_t||_p scales exactly like t^{-|alpha|/2 - m - (n/2)(1-1/p)}.
TEST(Kernels, PowerLawScaling) {
    for (const auto& a : std::vector<MultiIndex>{{0, 0}, {1, 0}, {2, 1}, {0, 3}}) {
        for (int m : {0, 1}) {
            for (double p : {1.0, 2.0, p_infinity}) {
                GridSpec g{10.0, 161, p};
                auto d = [&](std::span<const double> x, double t) { return heat_kernel_derivative(a, m, x, t); };
                const double r = lp_error_norm(d, 8.0, g, 2) / lp_error_norm(d, 2.0, g, 2);
                const double gamma = 0.5 * a.order() + m + (std::isinf(p) ? 1.0 : 1.0 - 1.0 / p);
                EXPECT_NEAR(r / std::pow(4.0, -gamma), 1.0, 1e-3) << a << " m=" << m << " p=" << p;
            }
        }
    }
}

TEST(Kernels, SphereMeasure) {
    EXPECT_NEAR(sphere_measure(2), 2 * pi, 1e-13);
    EXPECT_NEAR(sphere_measure(3), 4 * pi, 1e-13);
    EXPECT_NEAR(sphere_measure(4), 2 * pi * pi, 1e-13);
    EXPECT_NEAR(sphere_measure(5), 8 * pi * pi / 3, 1e-13);
    EXPECT_NEAR(sphere_measure(6), pi * pi * pi, 1e-13);
    for (int n = 2; n <= 6; ++n) EXPECT_NEAR(sphere_monomial_integral(MultiIndex::zero(n)), sphere_measure(n), 1e-12);
}

TEST(Kernels, SphereMonomials) {
    EXPECT_NEAR(sphere_monomial_integral({2, 0}), pi, 1e-14);
    EXPECT_NEAR(sphere_monomial_integral({2, 0, 0}), 4 * pi / 3, 1e-14);
    EXPECT_NEAR(sphere_monomial_integral({2, 2, 0}), 4 * pi / 15, 1e-14);
    EXPECT_EQ(sphere_monomial_integral({1, 2}), 0.0);
    // sum_i omega_i^2 = 1
    for (int n = 2; n <= 5; ++n) {
        double s = 0;
        for (int i = 0; i < n; ++i) s += sphere_monomial_integral(MultiIndex::zero(n).plus_unit(i, 2));
        EXPECT_NEAR(s, sphere_measure(n), 1e-12);
    }
}

TEST(Kernels, SphereIntegralOfDerivativeAgreesWithQuadrature) {
    for (int n : {2, 3}) {
        const auto sq = SphereQuadrature::build(n);
        for (const auto& a : enumerate_up_to(n, 4)) {
            auto ev = [&](std::span<const double> x, double t) { return heat_kernel_derivative(a, 0, x, t); };
            for (double r : {0.5, 1.7}) {
                const double exact = sphere_integral_of_derivative(a, r, 1.3);
                EXPECT_NEAR(sphere_average(ev, r, 1.3, sq), exact, 1e-12) << a;
                if (a.order() % 2 == 1) {
                    EXPECT_NEAR(exact, 0.0, 1e-14);
                }
            }
        }
    }
}

TEST(Kernels, ZerothOrderModifiedKernel) {
    const auto t = compute_moment_table(fixtures::product_linear(2, 1.0), 2);
    const auto s = derive_shifts(t, 0);
    const auto g = ModifiedKernel::from_shifts(t, s, ShiftMode::full);
    EXPECT_EQ(g.order(), 0);
    EXPECT_DOUBLE_EQ(g.t_min(), 0.0);
    const double x[] = {0.2, 1.4};
    const double shifted[] = {0.2 - 0.5, 1.4 - 0.5};
    EXPECT_NEAR(g(x, 3.0), pi * heat_kernel(shifted, 3.125), 1e-16);
    const auto none = ModifiedKernel::from_shifts(t, s, ShiftMode::none);
    EXPECT_NEAR(none(x, 3.0), pi * heat_kernel(x, 3.0), 1e-16);
    const auto sp = ModifiedKernel::from_shifts(t, s, ShiftMode::spatial_only);
    EXPECT_NEAR(sp(x, 3.0), pi * heat_kernel(shifted, 3.0), 1e-16);
    EXPECT_THROW(g(x, 0.0), std::domain_error);
}

TEST(Kernels, PositiveTimeShiftRaisesDomainFloor) {
    // Anisotropic-free datum with t* > 0: slope c = 2 gives t* = 1/4.
    const auto t = compute_moment_table(fixtures::product_linear(2, 2.0), 2);
    const auto s = derive_shifts(t, 0);
    const auto g = ModifiedKernel::from_shifts(t, s, ShiftMode::full);
    EXPECT_NEAR(g.t_min(), 0.25, 1e-15);
    const double x[] = {0.0, 0.0};
    EXPECT_THROW(g(x, 0.2), std::domain_error);
    EXPECT_NO_THROW(g(x, 0.3));
}

TEST(Kernels, FirstOrderModifiedKernel) {
    const auto t = compute_moment_table(fixtures::first_order(2), 3);
    const auto s = derive_shifts(t, 1);
    const auto g = ModifiedKernel::from_shifts(t, s, ShiftMode::full);
    // M_0 = 0, so only -M_{e_1} d_1 G_t(x - x*) remains.
    ASSERT_EQ(g.terms().size(), 1u);
    const std::vector<double> x{0.4, -1.1};
    const std::vector<double> xs{0.4 + 1 / std::sqrt(2.0), -1.1};
    EXPECT_NEAR(g(x, 2.0), -fixtures::frozen::E_M10 * heat_kernel_derivative({1, 0}, 0, xs, 2.0), 1e-16);
}

TEST(Kernels, TimeShiftRequiresConditionA) {
    const HermiteGaussianSum f(2, {TensorTerm{{{1.0, 0.0, 1.0}, {1.0}}}});
    const auto t = compute_moment_table(f, 2);
    const auto s = derive_shifts(t, 0);
    EXPECT_THROW(ModifiedKernel::from_shifts(t, s, ShiftMode::full), ConditionAError);
    EXPECT_NO_THROW(ModifiedKernel::from_shifts(t, s, ShiftMode::spatial_only));
}

TEST(Kernels, GaussianProfileIsExact) {
    const auto f = fixtures::gaussian(2);
    const auto t = compute_moment_table(f, 2);
    const auto g = ModifiedKernel::from_shifts(t, derive_shifts(t, 0), ShiftMode::full);
    for (double tt : {0.1, 1.0, 30.0}) {
        const double x[] = {0.7 * std::sqrt(tt), -1.2 * std::sqrt(tt)};
        EXPECT_NEAR(g(x, tt), propagate_exact(f, x, tt), 1e-15);
    }
}
