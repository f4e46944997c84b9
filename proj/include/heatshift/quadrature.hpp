#pragma once

#include <gsl/gsl_integration.h>

#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

namespace heatshift {

// One-dimensional rule: integral ~ sum_q weights[q] * g(nodes[q]).
struct Rule1D {
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const { return nodes.size(); }
};

namespace detail {

struct FixedWorkspaceDeleter {
    void operator()(gsl_integration_fixed_workspace* w) const { gsl_integration_fixed_free(w); }
};

inline Rule1D fixed_rule(const gsl_integration_fixed_type* type, int n, double a, double b,
                         double alpha, double beta) {
    if (n < 1) throw std::invalid_argument("quadrature: need at least one node");
    std::unique_ptr<gsl_integration_fixed_workspace, FixedWorkspaceDeleter> w(
        gsl_integration_fixed_alloc(type, static_cast<std::size_t>(n), a, b, alpha, beta));
    if (!w) throw std::runtime_error("quadrature: GSL rule allocation failed");
    const double* x = gsl_integration_fixed_nodes(w.get());
    const double* q = gsl_integration_fixed_weights(w.get());
    Rule1D r;
    r.nodes.assign(x, x + n);
    r.weights.assign(q, q + n);
    return r;
}

}  // namespace detail

// Gauss-Legendre on [a, b].
inline Rule1D gauss_legendre(int n, double a, double b) {
    if (!(b > a)) throw std::invalid_argument("gauss_legendre: need a < b");
    return detail::fixed_rule(gsl_integration_fixed_legendre, n, a, b, 0.0, 0.0);
}

// Gauss-Hermite for the weight exp(-x^2) on the real line.
inline Rule1D gauss_hermite(int n) {
    return detail::fixed_rule(gsl_integration_fixed_hermite, n, 0.0, 1.0, 0.0, 0.0);
}

// Gauss-Gegenbauer for the weight (1 - x^2)^lambda on [-1, 1], lambda > -1.
inline Rule1D gauss_gegenbauer(int n, double lambda) {
    if (!(lambda > -1.0)) throw std::invalid_argument("gauss_gegenbauer: lambda must exceed -1");
    if (lambda == 0.0) return gauss_legendre(n, -1.0, 1.0);
    return detail::fixed_rule(gsl_integration_fixed_gegenbauer, n, -1.0, 1.0, lambda, 0.0);
}

// Composite trapezoid on the uniform grid a = x_0 < ... < x_{m-1} = b.
inline Rule1D trapezoid(int points, double a, double b) {
    if (points < 2) throw std::invalid_argument("trapezoid: need at least two points");
    Rule1D r;
    const double h = (b - a) / (points - 1);
    for (int i = 0; i < points; ++i) {
        r.nodes.push_back(i == points - 1 ? b : a + i * h);
        r.weights.push_back((i == 0 || i == points - 1) ? 0.5 * h : h);
    }
    return r;
}

// Sum with a fixed pairwise tree; the result depends only on the input order.
inline double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t h = v.size() / 2;
    return pairwise_sum(v.first(h)) + pairwise_sum(v.subspan(h));
}

}  // namespace heatshift
