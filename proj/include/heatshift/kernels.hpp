#pragma once

#include "heatshift/initial_data.hpp"
#include "heatshift/multiindex.hpp"
#include "heatshift/shifts.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

namespace heatshift {

// Physicists' Hermite polynomial by H_{j+1} = 2z H_j - 2j H_{j-1}.
inline double hermite_poly(int j, double z) {
    if (j < 0) throw std::invalid_argument("hermite_poly: j must be >= 0");
    double h0 = 1.0;
    if (j == 0) return h0;
    double h1 = 2.0 * z;
    for (int i = 1; i < j; ++i) {
        const double h2 = 2.0 * z * h1 - 2.0 * i * h0;
        h0 = h1;
        h1 = h2;
    }
    return h1;
}

// Power-basis coefficients of H_j from the alternating sum
// H_j(x) = sum_m (-1)^m j! / (m! (j-2m)!) (2x)^{j-2m}.
inline std::vector<double> hermite_coefficients(int j) {
    if (j < 0) throw std::invalid_argument("hermite_coefficients: j must be >= 0");
    std::vector<double> c(static_cast<std::size_t>(j) + 1, 0.0);
    for (int m = 0; 2 * m <= j; ++m) {
        const int p = j - 2 * m;
        double v = std::exp(std::lgamma(j + 1.0) - std::lgamma(m + 1.0) - std::lgamma(p + 1.0)) * std::ldexp(1.0, p);
        c[static_cast<std::size_t>(p)] = (m % 2 ? -v : v);
    }
    return c;
}

// One-dimensional heat kernel (4 pi t)^{-1/2} exp(-x^2 / 4t) and its j-th derivative
// g_t(x) (-1/(2 sqrt t))^j H_j(x / (2 sqrt t)).
inline double heat_kernel_1d(double x, double t) {
    return std::exp(-x * x / (4.0 * t)) / std::sqrt(4.0 * std::numbers::pi * t);
}

inline double heat_kernel_1d_derivative(int j, double x, double t) {
    const double s = 2.0 * std::sqrt(t);
    return heat_kernel_1d(x, t) * std::pow(-1.0 / s, j) * hermite_poly(j, x / s);
}

inline void require_positive_time(double t, const char* who) {
    if (!(t > 0.0)) throw std::domain_error(std::string(who) + ": t must be > 0");
}

// G_t(x) = (4 pi t)^{-n/2} exp(-|x|^2 / 4t)
inline double heat_kernel(std::span<const double> x, double t) {
    require_positive_time(t, "heat_kernel");
    double r2 = 0.0;
    for (double v : x) r2 += v * v;
    return std::exp(-r2 / (4.0 * t)) / std::pow(4.0 * std::numbers::pi * t, 0.5 * static_cast<double>(x.size()));
}

// d_t^m d_x^alpha G_t(x). Time derivatives become Laplacians through the heat
// equation: Delta^m = sum_{|beta|=m} m!/beta! d^{2 beta}.
inline double heat_kernel_derivative(const MultiIndex& alpha, int m, std::span<const double> x, double t) {
    require_positive_time(t, "heat_kernel_derivative");
    if (m < 0) throw std::invalid_argument("heat_kernel_derivative: m must be >= 0");
    const int n = alpha.dim();
    if (static_cast<int>(x.size()) != n) throw std::invalid_argument("heat_kernel_derivative: dimension mismatch");
    if (m == 0) {
        double v = 1.0;
        for (int i = 0; i < n; ++i) v *= heat_kernel_1d_derivative(alpha[i], x[static_cast<std::size_t>(i)], t);
        return v;
    }
    const double mf = static_cast<double>(checked_factorial(m));
    double total = 0.0;
    for (const auto& beta : enumerate_order(n, m)) {
        double v = mf / static_cast<double>(multi_factorial(beta));
        for (int i = 0; i < n; ++i)
            v *= heat_kernel_1d_derivative(alpha[i] + 2 * beta[i], x[static_cast<std::size_t>(i)], t);
        total += v;
    }
    return total;
}

// |S^{n-1}| = 2 pi^{n/2} / Gamma(n/2)
inline double sphere_measure(int n) {
    if (n < 2) throw std::invalid_argument("sphere_measure: n must be >= 2");
    return 2.0 * std::exp(0.5 * n * std::log(std::numbers::pi) - std::lgamma(0.5 * n));
}

// int_{S^{n-1}} omega^alpha d omega: zero if any alpha_i is odd, otherwise
// 2 prod Gamma(m_i + 1/2) / Gamma(|m| + n/2) with alpha = 2m.
inline double sphere_monomial_integral(const MultiIndex& alpha) {
    const int n = alpha.dim();
    if (n < 2) throw std::invalid_argument("sphere_monomial_integral: n must be >= 2");
    if (!alpha.all_even()) return 0.0;
    double lg = 0.0;
    int msum = 0;
    for (int v : alpha.components()) {
        lg += std::lgamma(0.5 * v + 0.5);
        msum += v / 2;
    }
    lg -= std::lgamma(msum + 0.5 * n);
    return 2.0 * std::exp(lg);
}

// int_{S^{n-1}} d^alpha G_t(r omega) d omega, by expanding the Hermite factors in
// powers of omega_i and integrating each monomial exactly.
inline double sphere_integral_of_derivative(const MultiIndex& alpha, double r, double t) {
    require_positive_time(t, "sphere_integral_of_derivative");
    const int n = alpha.dim();
    const double s = 2.0 * std::sqrt(t);
    const double radial = std::exp(-r * r / (4.0 * t)) / std::pow(4.0 * std::numbers::pi * t, 0.5 * n) *
                          std::pow(-1.0 / s, alpha.order());
    std::vector<std::vector<double>> axis(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        auto c = hermite_coefficients(alpha[i]);
        for (std::size_t p = 0; p < c.size(); ++p) c[p] *= std::pow(r / s, static_cast<double>(p));
        axis[static_cast<std::size_t>(i)] = std::move(c);
    }
    double total = 0.0;
    std::vector<int> pw(static_cast<std::size_t>(n), 0);
    auto rec = [&](auto&& self, int i, double coeff) -> void {
        if (coeff == 0.0) return;
        if (i == n) {
            total += coeff * sphere_monomial_integral(MultiIndex(pw));
            return;
        }
        const auto& c = axis[static_cast<std::size_t>(i)];
        for (std::size_t p = 0; p < c.size(); ++p) {
            pw[static_cast<std::size_t>(i)] = static_cast<int>(p);
            self(self, i + 1, coeff * c[p]);
        }
    };
    rec(rec, 0, 1.0);
    return radial * total;
}

// Which of the derived shifts a modified kernel applies.
enum class ShiftMode { full, spatial_only, temporal_only, none };

// k-th order modified heat kernel:
//   sum_{|a|<=k-1} (-1)^{|a|}/a! M_a d^a G_t(x)
// + sum_{a in Lambda_k} (-1)^k/a! M_a d^a G_{t - t*_a}(x - x*_a).
// With k = 0 this is M_0 G_{t-t*}(x - x*).
class ModifiedKernel {
public:
    struct Term {
        double coeff = 0.0;
        MultiIndex alpha;
        Point shift;
        double time_shift = 0.0;
    };

    ModifiedKernel(const MomentTable& table, int k, const std::vector<MultiIndex>& lambda_k,
                   const std::map<MultiIndex, Point>& x_star, const std::map<MultiIndex, double>& t_star)
        : k_(k), n_(table.dim()) {
        if (k < 0) throw std::invalid_argument("ModifiedKernel: k must be >= 0");
        if (table.max_order() < k) throw std::out_of_range("ModifiedKernel: table needs order k");
        const Point origin(static_cast<std::size_t>(n_), 0.0);
        for (int l = 0; l < k; ++l) {
            for (const auto& a : enumerate_order(n_, l)) {
                const double m = table.at(a);
                if (m == 0.0) continue;
                const double sign = (l % 2 == 0) ? 1.0 : -1.0;
                terms_.push_back({sign * m / static_cast<double>(multi_factorial(a)), a, origin, 0.0});
            }
        }
        t_min_ = 0.0;
        const double sign_k = (k % 2 == 0) ? 1.0 : -1.0;
        for (const auto& a : lambda_k) {
            auto xs = x_star.find(a);
            auto ts = t_star.find(a);
            Point shift = xs == x_star.end() ? origin : xs->second;
            const double tshift = ts == t_star.end() ? 0.0 : ts->second;
            if (static_cast<int>(shift.size()) != n_) throw std::invalid_argument("ModifiedKernel: shift dimension");
            t_min_ = std::max(t_min_, tshift);
            terms_.push_back({sign_k * table.at(a) / static_cast<double>(multi_factorial(a)), a, std::move(shift), tshift});
        }
    }

    static ModifiedKernel from_shifts(const MomentTable& table, const ShiftSet& shifts, ShiftMode mode) {
        const bool space = mode == ShiftMode::full || mode == ShiftMode::spatial_only;
        const bool time = mode == ShiftMode::full || mode == ShiftMode::temporal_only;
        if (time && shifts.t_star.size() != shifts.lambda_k.size())
            throw ConditionAError("ModifiedKernel: time shifts requested but Condition A does not hold");
        static const std::map<MultiIndex, Point> no_x;
        static const std::map<MultiIndex, double> no_t;
        return ModifiedKernel(table, shifts.k, shifts.lambda_k, space ? shifts.x_star : no_x,
                              time ? shifts.t_star : no_t);
    }

    int order() const { return k_; }
    int dim() const { return n_; }
    double t_min() const { return t_min_; }
    const std::vector<Term>& terms() const { return terms_; }

    double operator()(std::span<const double> x, double t) const {
        if (!(t > t_min_)) throw std::domain_error("ModifiedKernel: t must exceed max(t*, 0)");
        if (static_cast<int>(x.size()) != n_) throw std::invalid_argument("ModifiedKernel: dimension mismatch");
        double total = 0.0;
        for (const auto& term : terms_) {
            const double tt = t - term.time_shift;
            double v = term.coeff;
            for (int i = 0; i < n_; ++i) {
                const auto ui = static_cast<std::size_t>(i);
                v *= heat_kernel_1d_derivative(term.alpha[i], x[ui] - term.shift[ui], tt);
            }
            total += v;
        }
        return total;
    }

private:
    int k_;
    int n_;
    double t_min_ = 0.0;
    std::vector<Term> terms_;
};

inline double modified_kernel_value(const ModifiedKernel& kernel, std::span<const double> x, double t) {
    return kernel(x, t);
}

}  // namespace heatshift
