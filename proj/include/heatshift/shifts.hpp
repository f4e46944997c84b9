#pragma once

#include "heatshift/initial_data.hpp"
#include "heatshift/multiindex.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace heatshift {

using Point = std::vector<double>;

// Lambda_k(f) is empty for the requested order; the theorems presuppose it is not.
class EmptyLambdaError : public std::runtime_error {
public:
    EmptyLambdaError(int k, std::optional<int> suggestion)
        : std::runtime_error(message(k, suggestion)), order(k), suggested(suggestion) {}

    int order;
    std::optional<int> suggested;

private:
    static std::string message(int k, std::optional<int> s) {
        std::string m = "Lambda_" + std::to_string(k) + " is empty";
        if (s) return m + "; smallest non-degenerate order is " + std::to_string(*s);
        return m + "; Lambda_k empty up to k_max";
    }
};

class ConditionAError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ConditionAViolation {
    MultiIndex alpha;
    int i = 0;
    int j = 0;
    double residual = 0.0;
    std::string kind;  // "offdiag", "diag" or "vanishing"
};

struct ConditionAReport {
    bool holds = false;
    double tol = 0.0;
    std::map<MultiIndex, double> c_alpha;
    double max_offdiag_residual = 0.0;
    double max_diag_spread = 0.0;
    double vanishing_residual = 0.0;
    std::vector<ConditionAViolation> violations;
};

struct ShiftSet {
    int k = 0;
    std::vector<MultiIndex> lambda_k;
    std::map<MultiIndex, Point> x_star;
    std::map<MultiIndex, double> t_star;  // empty when Condition A fails
    ConditionAReport report;
};

// Moments below zero_tol times the largest table magnitude count as zero. The
// reference spans every order: a single order-0 entry has nothing to compare
// against at its own order.
inline double zero_threshold(const MomentTable& table, double zero_tol) {
    return zero_tol * table.max_abs();
}

inline std::vector<MultiIndex> lambda_set(const MomentTable& table, int order, double zero_tol) {
    if (order < 0 || order > table.max_order())
        throw std::out_of_range("lambda_set: order exceeds table range");
    const double thr = zero_threshold(table, zero_tol);
    std::vector<MultiIndex> out;
    for (const auto& a : enumerate_order(table.dim(), order))
        if (std::abs(table.at(a)) > thr) out.push_back(a);
    return out;
}

inline std::vector<MultiIndex> lambda_set(const MomentTable& table, int order) {
    return lambda_set(table, order, table.zero_tol());
}

// Smallest order <= k_max with a non-vanishing moment.
inline std::optional<int> find_min_nondegenerate_order(const MomentTable& table, int k_max) {
    if (k_max > table.max_order()) throw std::out_of_range("find_min_nondegenerate_order: k_max > K");
    for (int l = 0; l <= k_max; ++l)
        if (!lambda_set(table, l).empty()) return l;
    return std::nullopt;
}

// x^{*,alpha}_i = M_{alpha+e_i} / ((k+1) M_alpha)
inline std::map<MultiIndex, Point> spatial_shifts(const MomentTable& table, int k,
                                                  const std::vector<MultiIndex>& lambda_k) {
    if (lambda_k.empty()) throw EmptyLambdaError(k, std::nullopt);
    if (table.max_order() < k + 1) throw std::out_of_range("spatial_shifts: table needs order k+1");
    const int n = table.dim();
    const double thr = zero_threshold(table, table.zero_tol());
    std::map<MultiIndex, Point> out;
    for (const auto& a : lambda_k) {
        const double m = table.at(a);
        if (std::abs(m) <= thr)
            throw std::invalid_argument("spatial_shifts: M" + a.to_string() + " is below zero tolerance");
        Point x(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = table.at(a.plus_unit(i)) / ((k + 1) * m);
        out.emplace(a, std::move(x));
    }
    return out;
}

// Left side of Condition A for one alpha:
// M_{alpha+e_i+e_j}/((k+1)(k+2)) - M_alpha x_i x_j / 2.
inline double condition_a_entry(const MomentTable& table, int k, const MultiIndex& a, const Point& x, int i,
                                int j) {
    return table.at(a.plus_unit(i).plus_unit(j)) / ((k + 1.0) * (k + 2.0)) -
           0.5 * table.at(a) * x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(j)];
}

// Residuals are absolute; each is compared against tol * (1 + |M_alpha| * scale),
// scale being the largest moment magnitude of order <= k+2 (|M_alpha| -> 1 for
// the vanishing-moment part).
inline ConditionAReport check_condition_a(const MomentTable& table, int k, const std::vector<MultiIndex>& lambda_k,
                                          const std::map<MultiIndex, Point>& x_star, double tol = 1e-9) {
    if (table.max_order() < k + 2) throw std::out_of_range("check_condition_a: table needs order k+2");
    const int n = table.dim();
    const double scale = table.max_abs(k + 2);
    ConditionAReport rep;
    rep.tol = tol;

    for (const auto& a : lambda_k) {
        const Point& x = x_star.at(a);
        const double thr = tol * (1.0 + std::abs(table.at(a)) * scale);
        std::vector<double> diag(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                const double v = condition_a_entry(table, k, a, x, i, j);
                if (i == j) {
                    diag[static_cast<std::size_t>(i)] = v;
                } else if (j > i) {
                    rep.max_offdiag_residual = std::max(rep.max_offdiag_residual, std::abs(v));
                    if (std::abs(v) > thr) rep.violations.push_back({a, i, j, v, "offdiag"});
                }
            }
        }
        double mean = 0.0;
        for (double d : diag) mean += d;
        mean /= n;
        rep.c_alpha[a] = mean;
        for (int i = 0; i < n; ++i) {
            const double spread = diag[static_cast<std::size_t>(i)] - mean;
            rep.max_diag_spread = std::max(rep.max_diag_spread, std::abs(spread));
            if (std::abs(spread) > thr) rep.violations.push_back({a, i, i, spread, "diag"});
        }
    }

    const double thr_vanish = tol * (1.0 + scale);
    for (const auto& a : enumerate_order(n, k)) {
        if (std::find(lambda_k.begin(), lambda_k.end(), a) != lambda_k.end()) continue;
        for (int i = 0; i < n; ++i) {
            const double v = table.at(a.plus_unit(i));
            rep.vanishing_residual = std::max(rep.vanishing_residual, std::abs(v));
            if (std::abs(v) > thr_vanish) rep.violations.push_back({a, i, -1, v, "vanishing"});
        }
        for (const auto& a2 : enumerate_order(n, 2)) {
            const double v = table.at(a + a2);
            rep.vanishing_residual = std::max(rep.vanishing_residual, std::abs(v));
            if (std::abs(v) > thr_vanish) rep.violations.push_back({a + a2, -1, -1, v, "vanishing"});
        }
    }

    rep.holds = rep.violations.empty();
    return rep;
}

// t^{*,alpha} = -c_alpha / M_alpha
inline std::map<MultiIndex, double> time_shifts(const ConditionAReport& report, const MomentTable& table,
                                                const std::vector<MultiIndex>& lambda_k) {
    if (!report.holds) throw ConditionAError("time_shifts: Condition A does not hold");
    std::map<MultiIndex, double> out;
    for (const auto& a : lambda_k) out[a] = -report.c_alpha.at(a) / table.at(a);
    return out;
}

// Lambda_k, spatial shifts, Condition A and (when it holds) time shifts.
inline ShiftSet derive_shifts(const MomentTable& table, int k, double condition_a_tol = 1e-9) {
    ShiftSet s;
    s.k = k;
    s.lambda_k = lambda_set(table, k);
    if (s.lambda_k.empty())
        throw EmptyLambdaError(k, find_min_nondegenerate_order(table, table.max_order()));
    s.x_star = spatial_shifts(table, k, s.lambda_k);
    s.report = check_condition_a(table, k, s.lambda_k, s.x_star, condition_a_tol);
    if (s.report.holds) s.t_star = time_shifts(s.report, table, s.lambda_k);
    return s;
}

// s = (2(k+1) + sqrt(2k(k+1))) / 2
inline double identity_scale(int k) { return (2.0 * (k + 1) + std::sqrt(2.0 * k * (k + 1))) / 2.0; }

struct ShiftIdentities {
    std::optional<double> variance_residual;  // k = 0 only
    double scaled_residual = 0.0;
    double s = 0.0;
};

// Mismatch of n(k+1)(k+2) M_alpha t* = -sum_i int (x_i - s x*_i)^2 x^alpha f,
// expanded in moments; the k = 0 case is 2n t* M_0 = -sum_i int (x_i - x*_i)^2 f.
inline ShiftIdentities verify_shift_identities(const MomentTable& table, const ShiftSet& shifts) {
    const int k = shifts.k;
    const int n = table.dim();
    if (table.max_order() < k + 2) throw std::out_of_range("verify_shift_identities: table needs order k+2");
    if (shifts.t_star.size() != shifts.lambda_k.size())
        throw ConditionAError("verify_shift_identities: time shifts are undefined");
    ShiftIdentities out;
    out.s = identity_scale(k);
    const double s = out.s;
    double rvar = 0.0;
    for (const auto& a : shifts.lambda_k) {
        const Point& x = shifts.x_star.at(a);
        const double m = table.at(a);
        const double t = shifts.t_star.at(a);
        const double lhs = n * (k + 1.0) * (k + 2.0) * m * t;
        double rhs = 0.0;
        double rhs_var = 0.0;
        for (int i = 0; i < n; ++i) {
            const double xi = x[static_cast<std::size_t>(i)];
            const double m2 = table.at(a.plus_unit(i, 2));
            const double m1 = table.at(a.plus_unit(i));
            rhs -= m2 - 2.0 * s * m1 * xi + s * s * m * xi * xi;
            rhs_var -= m2 - 2.0 * m1 * xi + m * xi * xi;
        }
        out.scaled_residual = std::max(out.scaled_residual, std::abs(lhs - rhs));
        if (k == 0) rvar = std::max(rvar, std::abs(2.0 * n * t * m - rhs_var));
    }
    if (k == 0) out.variance_residual = rvar;
    return out;
}

}  // namespace heatshift
