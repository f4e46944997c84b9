#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace heatshift {

// Multi-index alpha = (alpha_1, ..., alpha_n) of non-negative integers.
class MultiIndex {
public:
    MultiIndex() = default;

    explicit MultiIndex(int n) : c_(checked_dim(n), 0) {}

    MultiIndex(std::initializer_list<int> components) : c_(components) { validate(); }

    explicit MultiIndex(std::vector<int> components) : c_(std::move(components)) { validate(); }

    static MultiIndex zero(int n) { return MultiIndex(n); }

    // e_i, zero-based axis.
    static MultiIndex unit(int n, int i) {
        MultiIndex e(n);
        e.c_.at(static_cast<std::size_t>(i)) = 1;
        return e;
    }

    int dim() const { return static_cast<int>(c_.size()); }
    int operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
    std::span<const int> components() const { return c_; }

    int order() const {
        int s = 0;
        for (int v : c_) s += v;
        return s;
    }

    bool all_even() const {
        for (int v : c_)
            if (v % 2 != 0) return false;
        return true;
    }

    MultiIndex operator+(const MultiIndex& o) const {
        if (o.dim() != dim()) throw std::invalid_argument("MultiIndex: dimension mismatch");
        MultiIndex r = *this;
        for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] += o.c_[i];
        return r;
    }

    MultiIndex plus_unit(int i, int times = 1) const {
        MultiIndex r = *this;
        r.c_.at(static_cast<std::size_t>(i)) += times;
        return r;
    }

    // x^alpha
    double monomial(std::span<const double> x) const {
        double v = 1.0;
        for (std::size_t i = 0; i < c_.size(); ++i)
            for (int p = 0; p < c_[i]; ++p) v *= x[i];
        return v;
    }

    std::string to_string() const {
        std::string s = "(";
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (i) s += ',';
            s += std::to_string(c_[i]);
        }
        return s + ")";
    }

    auto operator<=>(const MultiIndex&) const = default;
    bool operator==(const MultiIndex&) const = default;

private:
    static std::size_t checked_dim(int n) {
        if (n < 1) throw std::invalid_argument("MultiIndex: dimension must be >= 1");
        return static_cast<std::size_t>(n);
    }

    void validate() const {
        if (c_.empty()) throw std::invalid_argument("MultiIndex: dimension must be >= 1");
        for (int v : c_)
            if (v < 0) throw std::invalid_argument("MultiIndex: negative component");
    }

    std::vector<int> c_;
};

inline std::ostream& operator<<(std::ostream& os, const MultiIndex& a) { return os << a.to_string(); }

// All alpha with |alpha| = order, lexicographically descending in the leading
// component: (n=2, order=1) -> (1,0), (0,1).
inline std::vector<MultiIndex> enumerate_order(int n, int order) {
    if (n < 1) throw std::invalid_argument("enumerate_order: n must be >= 1");
    if (order < 0) throw std::invalid_argument("enumerate_order: order must be >= 0");
    std::vector<MultiIndex> out;
    std::vector<int> cur(static_cast<std::size_t>(n), 0);
    auto rec = [&](auto&& self, int axis, int remaining) -> void {
        if (axis == n - 1) {
            cur[static_cast<std::size_t>(axis)] = remaining;
            out.emplace_back(cur);
            return;
        }
        for (int v = remaining; v >= 0; --v) {
            cur[static_cast<std::size_t>(axis)] = v;
            self(self, axis + 1, remaining - v);
        }
    };
    rec(rec, 0, order);
    return out;
}

// All alpha with |alpha| <= max_order, grouped by increasing order.
inline std::vector<MultiIndex> enumerate_up_to(int n, int max_order) {
    std::vector<MultiIndex> out;
    for (int l = 0; l <= max_order; ++l) {
        auto level = enumerate_order(n, l);
        out.insert(out.end(), level.begin(), level.end());
    }
    return out;
}

inline std::uint64_t checked_factorial(int k) {
    std::uint64_t f = 1;
    for (int i = 2; i <= k; ++i) {
        if (f > std::numeric_limits<std::uint64_t>::max() / static_cast<std::uint64_t>(i))
            throw std::overflow_error("factorial overflows 64-bit range");
        f *= static_cast<std::uint64_t>(i);
    }
    return f;
}

// alpha! = alpha_1! ... alpha_n!
inline std::uint64_t multi_factorial(const MultiIndex& a) {
    std::uint64_t f = 1;
    for (int v : a.components()) {
        const std::uint64_t fi = checked_factorial(v);
        if (fi != 0 && f > std::numeric_limits<std::uint64_t>::max() / fi)
            throw std::overflow_error("multi_factorial overflows 64-bit range");
        f *= fi;
    }
    return f;
}

// C(n, k) in double; only used for small arguments.
inline double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace heatshift
