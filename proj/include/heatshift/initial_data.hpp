#pragma once

#include "heatshift/multiindex.hpp"
#include "heatshift/parallel.hpp"
#include "heatshift/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <type_traits>
#include <variant>
#include <vector>

namespace heatshift {

class QuadratureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// gamma_j = int x^{2j} e^{-x^2} dx = |2j-1|!! sqrt(pi) / 2^j
inline double gamma_moment(int j) {
    if (j < 0) throw std::invalid_argument("gamma_moment: j must be >= 0");
    double v = std::sqrt(std::numbers::pi);
    for (int i = 1; i <= j; ++i) v *= (2.0 * i - 1.0) / 2.0;
    return v;
}

// int x^m (sum_j c_j x^j) e^{-x^2} dx
inline double axis_moment(std::span<const double> coeffs, int m) {
    if (coeffs.empty()) throw std::invalid_argument("axis_moment: empty coefficient list");
    if (m < 0) throw std::invalid_argument("axis_moment: m must be >= 0");
    double s = 0.0;
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
        const int p = m + static_cast<int>(j);
        if (p % 2 == 0 && coeffs[j] != 0.0) s += coeffs[j] * gamma_moment(p / 2);
    }
    return s;
}

inline double poly_value(std::span<const double> coeffs, double x) {
    double v = 0.0;
    for (std::size_t j = coeffs.size(); j-- > 0;) v = v * x + coeffs[j];
    return v;
}

// prod_i (sum_j c_{i,j} x_i^j) e^{-x_i^2}
struct TensorTerm {
    std::vector<std::vector<double>> axes;

    int dim() const { return static_cast<int>(axes.size()); }

    double operator()(std::span<const double> x) const {
        double v = 1.0;
        for (std::size_t i = 0; i < axes.size(); ++i) v *= poly_value(axes[i], x[i]) * std::exp(-x[i] * x[i]);
        return v;
    }

    void validate() const {
        if (axes.empty()) throw std::invalid_argument("TensorTerm: no axes");
        for (const auto& a : axes)
            if (a.empty()) throw std::invalid_argument("TensorTerm: empty axis coefficient list");
    }
};

struct HermiteGaussianSum {
    int n = 0;
    std::vector<TensorTerm> terms;

    HermiteGaussianSum() = default;
    HermiteGaussianSum(int dim, std::vector<TensorTerm> ts) : n(dim), terms(std::move(ts)) { validate(); }

    double operator()(std::span<const double> x) const {
        double v = 0.0;
        for (const auto& t : terms) v += t(x);
        return v;
    }

    // Largest per-axis polynomial degree over all terms.
    int max_degree() const {
        int d = 0;
        for (const auto& t : terms)
            for (const auto& a : t.axes) d = std::max(d, static_cast<int>(a.size()) - 1);
        return d;
    }

    void validate() const {
        if (n < 1) throw std::invalid_argument("HermiteGaussianSum: n must be >= 1");
        for (const auto& t : terms) {
            t.validate();
            if (t.dim() != n) throw std::invalid_argument("HermiteGaussianSum: term dimension mismatch");
        }
    }
};

enum class RuleKind { gauss_legendre, trapezoid };

struct QuadratureSpec {
    double radius = 8.0;
    int nodes = 64;
    RuleKind kind = RuleKind::gauss_legendre;

    void validate() const {
        if (!(radius > 0.0)) throw std::invalid_argument("QuadratureSpec: radius must be > 0");
        if (nodes < 2) throw std::invalid_argument("QuadratureSpec: need >= 2 nodes per axis");
    }

    Rule1D rule() const {
        validate();
        return kind == RuleKind::gauss_legendre ? gauss_legendre(nodes, -radius, radius)
                                                : trapezoid(nodes, -radius, radius);
    }
};

// Pointwise datum integrated on [-R, R]^n. Accuracy is only meaningful for
// smooth, rapidly decaying f; finiteness of the (k+2)-th absolute moment is
// the caller's obligation.
struct SampledData {
    int n = 0;
    std::function<double(std::span<const double>)> eval;
    QuadratureSpec quad;

    void validate() const {
        if (n < 1) throw std::invalid_argument("SampledData: n must be >= 1");
        if (!eval) throw std::invalid_argument("SampledData: missing evaluator");
        quad.validate();
    }
};

using InitialData = std::variant<HermiteGaussianSum, SampledData>;

inline int dimension(const InitialData& f) {
    return std::visit([](const auto& d) { return d.n; }, f);
}

inline double evaluate(const InitialData& f, std::span<const double> x) {
    return std::visit(
        [&](const auto& d) -> double {
            if constexpr (std::is_same_v<std::decay_t<decltype(d)>, SampledData>)
                return d.eval(x);
            else
                return d(x);
        },
        f);
}

// M_alpha(f) for all |alpha| <= K.
class MomentTable {
public:
    MomentTable(int n, int max_order, double zero_tol) : n_(n), K_(max_order), zero_tol_(zero_tol) {
        if (n < 1) throw std::invalid_argument("MomentTable: n must be >= 1");
        if (max_order < 0) throw std::invalid_argument("MomentTable: K must be >= 0");
        if (!(zero_tol >= 0.0)) throw std::invalid_argument("MomentTable: zero_tol must be >= 0");
    }

    int dim() const { return n_; }
    int max_order() const { return K_; }
    double zero_tol() const { return zero_tol_; }

    double at(const MultiIndex& a) const {
        auto it = entries_.find(a);
        if (it == entries_.end())
            throw std::out_of_range("MomentTable: no entry for " + a.to_string() + " (K=" +
                                    std::to_string(K_) + ")");
        return it->second;
    }
    double operator[](const MultiIndex& a) const { return at(a); }

    void set(const MultiIndex& a, double v) {
        if (a.dim() != n_ || a.order() > K_) throw std::out_of_range("MomentTable: index out of range");
        if (!std::isfinite(v)) throw std::invalid_argument("MomentTable: non-finite moment " + a.to_string());
        entries_[a] = v;
    }

    const std::map<MultiIndex, double>& entries() const { return entries_; }

    // Largest |M_beta| over |beta| <= order (all orders when order < 0).
    double max_abs(int order = -1) const {
        double m = 0.0;
        for (const auto& [a, v] : entries_)
            if (order < 0 || a.order() <= order) m = std::max(m, std::abs(v));
        return m;
    }

    bool complete() const {
        for (const auto& a : enumerate_up_to(n_, K_))
            if (!entries_.contains(a)) return false;
        return true;
    }

private:
    int n_;
    int K_;
    double zero_tol_;
    std::map<MultiIndex, double> entries_;
};

namespace detail {

// Node values of f on the tensor grid, lexicographic node order (last axis fastest).
struct SampledGrid {
    Rule1D rule;
    int n = 0;
    std::vector<double> values;

    std::size_t size() const { return values.size(); }

    void point(std::size_t flat, std::span<double> x, double& w) const {
        const std::size_t m = rule.size();
        w = 1.0;
        for (int i = n - 1; i >= 0; --i) {
            const std::size_t q = flat % m;
            flat /= m;
            x[static_cast<std::size_t>(i)] = rule.nodes[q];
            w *= rule.weights[q];
        }
    }
};

inline SampledGrid sample_grid(const SampledData& f) {
    f.validate();
    SampledGrid g{f.quad.rule(), f.n, {}};
    std::size_t total = 1;
    for (int i = 0; i < f.n; ++i) total *= g.rule.size();
    g.values.assign(total, 0.0);
    parallel_for(total, [&](std::size_t k) {
        std::vector<double> x(static_cast<std::size_t>(f.n));
        double w = 0.0;
        g.point(k, x, w);
        const double v = f.eval(x);
        if (!std::isfinite(v)) {
            std::ostringstream os;
            os << "non-finite sample at node (";
            for (std::size_t i = 0; i < x.size(); ++i) os << (i ? "," : "") << x[i];
            os << ")";
            throw QuadratureError(os.str());
        }
        g.values[k] = v;
    });
    return g;
}

inline double grid_moment(const SampledGrid& g, const MultiIndex& a) {
    std::vector<double> terms(g.size());
    std::vector<double> x(static_cast<std::size_t>(g.n));
    for (std::size_t k = 0; k < g.size(); ++k) {
        double w = 0.0;
        g.point(k, x, w);
        terms[k] = w * a.monomial(x) * g.values[k];
    }
    return pairwise_sum(terms);
}

}  // namespace detail

inline MomentTable compute_moment_table(const HermiteGaussianSum& f, int K, double zero_tol = 1e-12) {
    f.validate();
    MomentTable table(f.n, K, zero_tol);
    for (const auto& a : enumerate_up_to(f.n, K)) {
        double s = 0.0;
        for (const auto& term : f.terms) {
            double p = 1.0;
            for (int i = 0; i < f.n; ++i) p *= axis_moment(term.axes[static_cast<std::size_t>(i)], a[i]);
            s += p;
        }
        table.set(a, s);
    }
    return table;
}

inline MomentTable compute_moment_table(const SampledData& f, int K, double zero_tol = 1e-12) {
    MomentTable table(f.n, K, zero_tol);
    const auto grid = detail::sample_grid(f);
    for (const auto& a : enumerate_up_to(f.n, K)) table.set(a, detail::grid_moment(grid, a));
    return table;
}

inline MomentTable compute_moment_table(const InitialData& f, int K, double zero_tol = 1e-12) {
    return std::visit([&](const auto& d) { return compute_moment_table(d, K, zero_tol); }, f);
}

// Brute-force tensor-product estimate of M_alpha on [-R, R]^n. With the default
// 64-node Gauss-Legendre rule and R = 8 it resolves Gaussian-decaying data to
// ~1e-12 relative for |alpha| up to about 10.
inline double moment_quadrature_oracle(const SampledData& f, const MultiIndex& a) {
    if (a.dim() != f.n) throw std::invalid_argument("moment_quadrature_oracle: dimension mismatch");
    return detail::grid_moment(detail::sample_grid(f), a);
}

// Gauss-Hermite route for data that expose the e^{-|x|^2} factor; exact in exact
// arithmetic once nodes > (|alpha_i| + degree) / 2 per axis.
inline double moment_quadrature_oracle(const HermiteGaussianSum& f, const MultiIndex& a, int nodes = 24) {
    if (a.dim() != f.n) throw std::invalid_argument("moment_quadrature_oracle: dimension mismatch");
    const Rule1D gh = gauss_hermite(nodes);
    double s = 0.0;
    for (const auto& term : f.terms) {
        double p = 1.0;
        for (int i = 0; i < f.n; ++i) {
            const auto& c = term.axes[static_cast<std::size_t>(i)];
            double axis = 0.0;
            for (std::size_t q = 0; q < gh.size(); ++q)
                axis += gh.weights[q] * std::pow(gh.nodes[q], a[i]) * poly_value(c, gh.nodes[q]);
            p *= axis;
        }
        s += p;
    }
    return s;
}

}  // namespace heatshift
