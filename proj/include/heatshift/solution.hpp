#pragma once

#include "heatshift/initial_data.hpp"
#include "heatshift/kernels.hpp"
#include "heatshift/quadrature.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

namespace heatshift {

// Sum over terms of prod_i sum_j d_{i,j} g^{(j)}_s(x_i), g_s the 1D heat kernel.
// Heat flow for time t maps s -> s + t and leaves the coefficients alone.
class GaussianDerivativeField {
public:
    using AxisCoeffs = std::vector<double>;
    using Term = std::vector<AxisCoeffs>;

    GaussianDerivativeField(int n, double s, std::vector<Term> terms) : n_(n), s_(s), terms_(std::move(terms)) {
        if (!(s > 0.0)) throw std::domain_error("GaussianDerivativeField: time must be > 0");
    }

    // (sum_j c_j x^j) e^{-x^2} = sqrt(pi) sum_k d_k g^{(k)}_{1/4}(x), using
    // x^j = j!/2^j sum_m H_{j-2m}(x) / (m! (j-2m)!) and H_k e^{-x^2} = (-1)^k (e^{-x^2})^{(k)}.
    static GaussianDerivativeField from_initial(const HermiteGaussianSum& f) {
        f.validate();
        std::vector<Term> terms;
        terms.reserve(f.terms.size());
        for (const auto& tt : f.terms) {
            Term term;
            for (const auto& c : tt.axes) {
                AxisCoeffs d(c.size(), 0.0);
                for (std::size_t j = 0; j < c.size(); ++j) {
                    if (c[j] == 0.0) continue;
                    const int jj = static_cast<int>(j);
                    for (int m = 0; 2 * m <= jj; ++m) {
                        const int kk = jj - 2 * m;
                        const double w = std::exp(std::lgamma(jj + 1.0) - std::lgamma(m + 1.0) - std::lgamma(kk + 1.0)) /
                                         std::ldexp(1.0, jj);
                        d[static_cast<std::size_t>(kk)] += c[j] * w * (kk % 2 ? -1.0 : 1.0) * std::sqrt(std::numbers::pi);
                    }
                }
                term.push_back(std::move(d));
            }
            terms.push_back(std::move(term));
        }
        return GaussianDerivativeField(f.n, 0.25, std::move(terms));
    }

    int dim() const { return n_; }
    double kernel_time() const { return s_; }

    GaussianDerivativeField evolved(double t) const {
        if (t < 0.0) throw std::domain_error("GaussianDerivativeField: negative evolution time");
        return GaussianDerivativeField(n_, s_ + t, terms_);
    }

    double operator()(std::span<const double> x) const {
        const double sc = 2.0 * std::sqrt(s_);
        double total = 0.0;
        for (const auto& term : terms_) {
            double prod = 1.0;
            for (int i = 0; i < n_ && prod != 0.0; ++i) {
                const auto& d = term[static_cast<std::size_t>(i)];
                const double xi = x[static_cast<std::size_t>(i)];
                const double z = xi / sc;
                // H_0..H_{deg}(z) by recurrence, weighted by (-1/sc)^k.
                double axis = 0.0;
                double hp = 0.0, hc = 1.0, scale = 1.0;
                for (std::size_t k = 0; k < d.size(); ++k) {
                    axis += d[k] * scale * hc;
                    const double hn = 2.0 * z * hc - 2.0 * static_cast<double>(k) * hp;
                    hp = hc;
                    hc = hn;
                    scale *= -1.0 / sc;
                }
                prod *= axis * heat_kernel_1d(xi, s_);
            }
            total += prod;
        }
        return total;
    }

private:
    int n_;
    double s_;
    std::vector<Term> terms_;
};

// u(x, t) = (G_t * f)(x) in closed form.
inline double propagate_exact(const HermiteGaussianSum& f, std::span<const double> x, double t) {
    if (t < 0.0) throw std::domain_error("propagate_exact: t must be >= 0");
    return GaussianDerivativeField::from_initial(f).evolved(t)(x);
}

inline QuadratureSpec default_oracle_quadrature(double t) {
    return QuadratureSpec{8.0 + 4.0 * std::sqrt(std::max(t, 0.0)), 256, RuleKind::gauss_legendre};
}

// int G_t(x - y) f(y) dy by tensor-grid quadrature over [-R, R]^n. Tensor-term data
// factor into one-dimensional integrals per axis; sampled data use the full grid.
inline double convolution_oracle(const HermiteGaussianSum& f, std::span<const double> x, double t,
                                 const QuadratureSpec& quad) {
    require_positive_time(t, "convolution_oracle");
    const Rule1D rule = quad.rule();
    double total = 0.0;
    for (const auto& term : f.terms) {
        double prod = 1.0;
        for (int i = 0; i < f.n && prod != 0.0; ++i) {
            const auto& c = term.axes[static_cast<std::size_t>(i)];
            const double xi = x[static_cast<std::size_t>(i)];
            std::vector<double> parts(rule.size());
            for (std::size_t q = 0; q < rule.size(); ++q) {
                const double y = rule.nodes[q];
                const double v = heat_kernel_1d(xi - y, t) * poly_value(c, y) * std::exp(-y * y);
                if (!std::isfinite(v)) throw QuadratureError("convolution_oracle: non-finite sample");
                parts[q] = rule.weights[q] * v;
            }
            prod *= pairwise_sum(parts);
        }
        total += prod;
    }
    return total;
}

inline double convolution_oracle(const SampledData& f, std::span<const double> x, double t,
                                 const QuadratureSpec& quad) {
    require_positive_time(t, "convolution_oracle");
    SampledData g = f;
    g.quad = quad;
    const auto grid = detail::sample_grid(g);
    std::vector<double> parts(grid.size());
    std::vector<double> y(static_cast<std::size_t>(f.n)), d(static_cast<std::size_t>(f.n));
    for (std::size_t k = 0; k < grid.size(); ++k) {
        double w = 0.0;
        grid.point(k, y, w);
        for (std::size_t i = 0; i < d.size(); ++i) d[i] = x[i] - y[i];
        parts[k] = w * heat_kernel(d, t) * grid.values[k];
    }
    return pairwise_sum(parts);
}

inline double convolution_oracle(const InitialData& f, std::span<const double> x, double t,
                                 const QuadratureSpec& quad) {
    return std::visit([&](const auto& d) { return convolution_oracle(d, x, t, quad); }, f);
}

inline double convolution_oracle(const InitialData& f, std::span<const double> x, double t) {
    return convolution_oracle(f, x, t, default_oracle_quadrature(t));
}

// Product rule on S^{n-1}: uniform angles on S^1, then recursively
// omega = (u, sqrt(1-u^2) omega') with Gauss-Gegenbauer nodes in u for the
// weight (1-u^2)^{(n-3)/2}.
struct SphereQuadrature {
    int n = 0;
    std::vector<Point> nodes;
    std::vector<double> weights;

    std::size_t size() const { return nodes.size(); }

    // Defaults: n=2 -> 64 angles; n=3 -> 24 polar x 48 azimuthal; n>=4 -> 16 polar per level, 32 azimuthal.
    static SphereQuadrature build(int n, int polar = 0, int azimuth = 0) {
        if (n < 2) throw std::invalid_argument("SphereQuadrature: n must be >= 2");
        if (azimuth <= 0) azimuth = (n == 2) ? 64 : (n == 3 ? 48 : 32);
        if (polar <= 0) polar = (n == 3) ? 24 : 16;
        SphereQuadrature s;
        s.n = 2;
        for (int q = 0; q < azimuth; ++q) {
            const double th = 2.0 * std::numbers::pi * q / azimuth;
            s.nodes.push_back({std::cos(th), std::sin(th)});
            s.weights.push_back(2.0 * std::numbers::pi / azimuth);
        }
        for (int d = 3; d <= n; ++d) {
            const Rule1D u = gauss_gegenbauer(polar, 0.5 * (d - 3));
            SphereQuadrature next;
            next.n = d;
            for (std::size_t a = 0; a < u.size(); ++a) {
                const double sn = std::sqrt(std::max(0.0, 1.0 - u.nodes[a] * u.nodes[a]));
                for (std::size_t b = 0; b < s.size(); ++b) {
                    Point p;
                    p.reserve(static_cast<std::size_t>(d));
                    p.push_back(u.nodes[a]);
                    for (double v : s.nodes[b]) p.push_back(sn * v);
                    next.nodes.push_back(std::move(p));
                    next.weights.push_back(u.weights[a] * s.weights[b]);
                }
            }
            s = std::move(next);
        }
        return s;
    }
};

using PointEvaluator = std::function<double(std::span<const double>, double)>;

// [u](r) = int_{S^{n-1}} u(r omega, t) d omega
inline double sphere_average(const PointEvaluator& eval, double r, double t, const SphereQuadrature& squad) {
    if (!(r > 0.0)) throw std::invalid_argument("sphere_average: r must be > 0");
    std::vector<double> parts(squad.size());
    Point x(static_cast<std::size_t>(squad.n));
    for (std::size_t q = 0; q < squad.size(); ++q) {
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = r * squad.nodes[q][i];
        parts[q] = squad.weights[q] * eval(x, t);
    }
    return pairwise_sum(parts);
}

// x -> [eval](|x|), including the origin where the average is |S^{n-1}| eval(0).
inline PointEvaluator radial_sphere_profile(PointEvaluator eval, SphereQuadrature squad) {
    return [eval = std::move(eval), squad = std::move(squad)](std::span<const double> x, double t) {
        double r2 = 0.0;
        for (double v : x) r2 += v * v;
        if (r2 == 0.0) {
            double wsum = 0.0;
            for (double w : squad.weights) wsum += w;
            return wsum * eval(x, t);
        }
        return sphere_average(eval, std::sqrt(r2), t, squad);
    };
}

}  // namespace heatshift
