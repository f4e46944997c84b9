#pragma once

#include "heatshift/heatshift.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace fixtures {

using heatshift::HermiteGaussianSum;
using heatshift::TensorTerm;

inline constexpr double pi = std::numbers::pi;

// prod_i (1 + c x_i) e^{-x_i^2}: Condition A holds for every c.
inline HermiteGaussianSum product_linear(int n, double c = 1.0) {
    TensorTerm t;
    for (int i = 0; i < n; ++i) t.axes.push_back({1.0, c});
    return HermiteGaussianSum(n, {t});
}

// (1 + sqrt2 x_1 - 2 x_1^2) e^{-x_1^2} prod_{i>=2} (1 - 2/3 x_i^2) e^{-x_i^2}:
// M_0 = 0 and Lambda_1 = {e_1}.
inline HermiteGaussianSum first_order(int n) {
    TensorTerm t;
    t.axes.push_back({1.0, std::sqrt(2.0), -2.0});
    for (int i = 1; i < n; ++i) t.axes.push_back({1.0, 0.0, -2.0 / 3.0});
    return HermiteGaussianSum(n, {t});
}

// (1 + |x|^2) e^{-|x|^2} in the plane.
inline HermiteGaussianSum radial() {
    return HermiteGaussianSum(2, {TensorTerm{{{1.0}, {1.0}}}, TensorTerm{{{0.0, 0.0, 1.0}, {1.0}}},
                                  TensorTerm{{{1.0}, {0.0, 0.0, 1.0}}}});
}

inline HermiteGaussianSum gaussian(int n) {
    TensorTerm t;
    for (int i = 0; i < n; ++i) t.axes.push_back({1.0});
    return HermiteGaussianSum(n, {t});
}

inline HermiteGaussianSum zero(int n) {
    TensorTerm t;
    for (int i = 0; i < n; ++i) t.axes.push_back({0.0});
    return HermiteGaussianSum(n, {t});
}

inline heatshift::SampledData sampled(const HermiteGaussianSum& f, int nodes = 64, double radius = 8.0) {
    heatshift::SampledData s;
    s.n = f.n;
    s.eval = [f](std::span<const double> x) { return f(x); };
    s.quad = {radius, nodes, heatshift::RuleKind::gauss_legendre};
    return s;
}

// Explicit physicists' Hermite polynomials H_0..H_6.
inline double hermite_explicit(int j, double x) {
    const double x2 = x * x;
    switch (j) {
        case 0: return 1.0;
        case 1: return 2.0 * x;
        case 2: return 4.0 * x2 - 2.0;
        case 3: return 8.0 * x2 * x - 12.0 * x;
        case 4: return 16.0 * x2 * x2 - 48.0 * x2 + 12.0;
        case 5: return 32.0 * x2 * x2 * x - 160.0 * x2 * x + 120.0 * x;
        case 6: return 64.0 * x2 * x2 * x2 - 480.0 * x2 * x2 + 720.0 * x2 - 120.0;
    }
    return NAN;
}

// Reference values from 30-digit adaptive quadrature / numerical differentiation.
namespace frozen {
// first_order(2) moments
inline constexpr double E_M10 = 1.4809609793861220823;
inline constexpr double E_M20 = -2.0943951023931954923;
inline constexpr double E_M30 = 2.2214414690791831235;
inline constexpr double E_M40 = -6.2831853071795864769;
// product_linear(3, 1) moments
inline constexpr double D3_M000 = 5.5683279968317078453;
inline constexpr double D3_M100 = 2.7841639984158539226;
inline constexpr double D3_M211 = 0.69604099960396348066;
inline constexpr double D3_M311 = 1.044061499405945221;
inline constexpr double D3_M500 = 10.44061499405945221;
// radial() moments
inline constexpr double R_M40 = 9.4247779607693797154;
inline constexpr double R_M22 = 3.1415926535897932385;
// d^(2,1) G_{1.5} at (0.3, -0.7) and d_t d^(1,0) G_{1.5} there
inline constexpr double dG21 = -0.0036336604494692022024;
inline constexpr double dtG10 = 0.0061113994599320013478;
// u(x, 2) at x = (0.4, -1.1)
inline constexpr double uD = 0.087481887636828583141;
inline constexpr double uE = 0.01125469626222048132;
}  // namespace frozen

}  // namespace fixtures
