#pragma once

#include "heatshift/kernels.hpp"
#include "heatshift/parallel.hpp"
#include "heatshift/quadrature.hpp"
#include "heatshift/shifts.hpp"
#include "heatshift/solution.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace heatshift {

inline constexpr double p_infinity = std::numeric_limits<double>::infinity();

// Uniform grid in the self-similar variable z = x / sqrt(t), z in [-L, L]^n.
struct GridSpec {
    double half_width = 8.0;
    int points_per_axis = 129;
    double p = 2.0;

    void validate() const {
        if (!(half_width > 0.0)) throw std::invalid_argument("GridSpec: half_width must be > 0");
        if (points_per_axis < 3 || points_per_axis % 2 == 0)
            throw std::invalid_argument("GridSpec: points_per_axis must be odd and >= 3");
        if (!(p >= 1.0)) throw std::invalid_argument("GridSpec: p must be >= 1");
    }
};

// ||diff(., t)||_{L^p} for each p in ps from one sweep of the trapezoid rule on
// x = sqrt(t) z (volume element t^{n/2} dz); the grid maximum for p = inf.
inline std::vector<double> lp_error_norms(const PointEvaluator& diff, double t, const GridSpec& grid, int n,
                                          std::span<const double> ps) {
    require_positive_time(t, "lp_error_norm");
    grid.validate();
    if (n < 1) throw std::invalid_argument("lp_error_norm: n must be >= 1");
    for (double p : ps)
        if (!(p >= 1.0)) throw std::invalid_argument("lp_error_norm: p must be >= 1");
    const int m = grid.points_per_axis;
    const double h = 2.0 * grid.half_width / (m - 1);
    const double sq = std::sqrt(t);
    const std::size_t np = ps.size();

    std::size_t inner = 1;
    for (int i = 1; i < n; ++i) inner *= static_cast<std::size_t>(m);
    auto coord = [&](int j) { return j == m - 1 ? grid.half_width : -grid.half_width + j * h; };
    auto weight = [&](int j) { return (j == 0 || j == m - 1) ? 0.5 * h : h; };

    // rows[row * np + q]: partial sum (or maximum) of grid row `row` for ps[q].
    std::vector<double> rows(static_cast<std::size_t>(m) * np, 0.0);
    parallel_for(static_cast<std::size_t>(m), [&](std::size_t row) {
        Point x(static_cast<std::size_t>(n));
        std::vector<double> vals(inner), wts(inner), parts(inner);
        for (std::size_t k = 0; k < inner; ++k) {
            std::size_t rest = k;
            double w = weight(static_cast<int>(row));
            x[0] = sq * coord(static_cast<int>(row));
            for (int i = n - 1; i >= 1; --i) {
                const int j = static_cast<int>(rest % static_cast<std::size_t>(m));
                rest /= static_cast<std::size_t>(m);
                x[static_cast<std::size_t>(i)] = sq * coord(j);
                w *= weight(j);
            }
            const double v = diff(x, t);
            if (!std::isfinite(v)) {
                std::ostringstream os;
                os << "lp_error_norm: non-finite value at x = (";
                for (std::size_t i = 0; i < x.size(); ++i) os << (i ? "," : "") << x[i];
                os << "), t = " << t;
                throw QuadratureError(os.str());
            }
            vals[k] = std::abs(v);
            wts[k] = w;
        }
        for (std::size_t q = 0; q < np; ++q) {
            double& out = rows[row * np + q];
            if (std::isinf(ps[q])) {
                for (double v : vals) out = std::max(out, v);
            } else {
                for (std::size_t k = 0; k < inner; ++k)
                    parts[k] = wts[k] * (ps[q] == 1.0 ? vals[k] : std::pow(vals[k], ps[q]));
                out = pairwise_sum(parts);
            }
        }
    });

    std::vector<double> result(np);
    std::vector<double> column(static_cast<std::size_t>(m));
    for (std::size_t q = 0; q < np; ++q) {
        for (std::size_t r = 0; r < column.size(); ++r) column[r] = rows[r * np + q];
        if (std::isinf(ps[q])) {
            result[q] = *std::max_element(column.begin(), column.end());
        } else {
            const double integral = pairwise_sum(column) * std::pow(t, 0.5 * n);
            result[q] = std::pow(integral, 1.0 / ps[q]);
        }
    }
    return result;
}

inline double lp_error_norm(const PointEvaluator& diff, double t, const GridSpec& grid, int n) {
    const double p = grid.p;
    return lp_error_norms(diff, t, grid, n, std::span<const double>(&p, 1)).front();
}

// Largest coefficient magnitude of each error family of u - G^(k):
// I1 (first order), I21 (mixed second order), I22 (pure second order plus time
// shift) and I3 (moments attached to alpha outside Lambda_k).
struct ErrorComponents {
    double I1_max = 0.0;
    double I21_max = 0.0;
    double I22_max = 0.0;
    double I3_max = 0.0;
};

inline ErrorComponents error_component_coefficients(const MomentTable& table, const ShiftSet& shifts, int k) {
    if (table.max_order() < k + 2) throw std::out_of_range("error_component_coefficients: table needs order k+2");
    const int n = table.dim();
    const double kk1 = k + 1.0;
    const double kk12 = (k + 1.0) * (k + 2.0);
    ErrorComponents e;
    for (const auto& a : shifts.lambda_k) {
        const Point& x = shifts.x_star.at(a);
        const double m = table.at(a);
        const auto ts = shifts.t_star.find(a);
        const double t = ts == shifts.t_star.end() ? 0.0 : ts->second;
        for (int i = 0; i < n; ++i) {
            const auto ui = static_cast<std::size_t>(i);
            e.I1_max = std::max(e.I1_max, std::abs(-table.at(a.plus_unit(i)) / kk1 + m * x[ui]));
            for (int j = 0; j < n; ++j) {
                const auto uj = static_cast<std::size_t>(j);
                const double base = table.at(a.plus_unit(i).plus_unit(j)) / kk12 - 0.5 * m * x[ui] * x[uj];
                if (i != j)
                    e.I21_max = std::max(e.I21_max, std::abs(base));
                else
                    e.I22_max = std::max(e.I22_max, std::abs(base + m * t));
            }
        }
    }
    for (const auto& a : enumerate_order(n, k)) {
        if (std::find(shifts.lambda_k.begin(), shifts.lambda_k.end(), a) != shifts.lambda_k.end()) continue;
        for (int i = 0; i < n; ++i) e.I3_max = std::max(e.I3_max, std::abs(table.at(a.plus_unit(i))));
        for (const auto& a2 : enumerate_order(n, 2)) e.I3_max = std::max(e.I3_max, std::abs(table.at(a + a2)));
    }
    return e;
}

// Pointwise I1 (even k) or I2 (odd k) of the error expansion: the component whose
// sphere integral vanishes by parity for arbitrary spatial (resp. time) shifts.
inline PointEvaluator parity_component(const MomentTable& table, const ShiftSet& shifts, int k) {
    const int n = table.dim();
    struct Piece {
        double coeff;
        MultiIndex alpha;
    };
    std::vector<Piece> pieces;
    const double sign_k = (k % 2 == 0) ? 1.0 : -1.0;
    for (const auto& a : shifts.lambda_k) {
        const double pre = sign_k / static_cast<double>(multi_factorial(a));
        const double m = table.at(a);
        const Point& x = shifts.x_star.at(a);
        if (k % 2 == 0) {
            for (int i = 0; i < n; ++i) {
                const double c = -table.at(a.plus_unit(i)) / (k + 1.0) + m * x[static_cast<std::size_t>(i)];
                pieces.push_back({pre * c, a.plus_unit(i)});
            }
        } else {
            const auto ts = shifts.t_star.find(a);
            const double t = ts == shifts.t_star.end() ? 0.0 : ts->second;
            for (const auto& a2 : enumerate_order(n, 2)) {
                const double mono = a2.monomial(x);
                const double c = 2.0 / static_cast<double>(multi_factorial(a2)) *
                                 (table.at(a + a2) / ((k + 1.0) * (k + 2.0)) - 0.5 * m * mono);
                pieces.push_back({pre * c, a + a2});
            }
            for (int i = 0; i < n; ++i) pieces.push_back({pre * m * t, a.plus_unit(i, 2)});
        }
    }
    return [pieces = std::move(pieces)](std::span<const double> x, double t) {
        double v = 0.0;
        for (const auto& p : pieces)
            if (p.coeff != 0.0) v += p.coeff * heat_kernel_derivative(p.alpha, 0, x, t);
        return v;
    };
}

inline double sphere_projected_component_check(const MomentTable& table, const ShiftSet& shifts, int k, double t,
                                               double r, const SphereQuadrature& squad) {
    require_positive_time(t, "sphere_projected_component_check");
    return std::abs(sphere_average(parity_component(table, shifts, k), r, t, squad));
}

struct DecayFit {
    std::vector<double> times;
    std::vector<double> errors;
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

// Least squares of log(error) against log(t).
inline DecayFit fit_decay(std::vector<double> times, std::vector<double> errors) {
    if (times.size() != errors.size()) throw std::invalid_argument("fit_decay: size mismatch");
    if (times.size() < 3) throw std::invalid_argument("fit_decay: need at least 3 samples");
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!(times[i] > 0.0)) throw std::invalid_argument("fit_decay: times must be positive");
        if (i && !(times[i] > times[i - 1])) throw std::invalid_argument("fit_decay: times must increase");
        if (!(errors[i] > 0.0)) throw std::invalid_argument("fit_decay: non-positive error, cannot take log");
    }
    const auto N = static_cast<double>(times.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        sx += std::log(times[i]);
        sy += std::log(errors[i]);
    }
    const double mx = sx / N, my = sy / N;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double dx = std::log(times[i]) - mx, dy = std::log(errors[i]) - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    DecayFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double r = std::log(errors[i]) - (f.intercept + f.slope * std::log(times[i]));
        ss_res += r * r;
    }
    f.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
    f.times = std::move(times);
    f.errors = std::move(errors);
    return f;
}

enum class ExponentVariant { base, improved, sphere, no_time_shift };

// Decay exponent gamma in ||.||_{L^p} ~ t^{-gamma}:
//   base           (k+2)/2
//   improved       (k+3)/2
//   sphere         (k+3)/2 for even k, (k+2)/2 for odd k
//   no_time_shift  (k+1)/2
// each plus (n/2)(1 - 1/p).
inline double expected_exponent(int k, int n, double p, ExponentVariant v) {
    if (!(p >= 1.0)) throw std::invalid_argument("expected_exponent: p must be >= 1");
    const double spatial = 0.5 * n * (1.0 - (std::isinf(p) ? 0.0 : 1.0 / p));
    double lead = 0.0;
    switch (v) {
        case ExponentVariant::base: lead = (k + 2) / 2.0; break;
        case ExponentVariant::improved: lead = (k + 3) / 2.0; break;
        case ExponentVariant::sphere: lead = (k % 2 == 0 ? k + 3 : k + 2) / 2.0; break;
        case ExponentVariant::no_time_shift: lead = (k + 1) / 2.0; break;
    }
    return lead + spatial;
}

}  // namespace heatshift
