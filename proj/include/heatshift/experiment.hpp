#pragma once

#include "heatshift/analysis.hpp"
#include "heatshift/initial_data.hpp"
#include "heatshift/kernels.hpp"
#include "heatshift/shifts.hpp"
#include "heatshift/solution.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace heatshift {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Variant { full_shift, no_time_shift, no_shift };

inline const char* variant_name(Variant v) {
    switch (v) {
        case Variant::full_shift: return "full_shift";
        case Variant::no_time_shift: return "no_time_shift";
        case Variant::no_shift: return "no_shift";
    }
    return "?";
}

inline ShiftMode variant_mode(Variant v) {
    switch (v) {
        case Variant::full_shift: return ShiftMode::full;
        case Variant::no_time_shift: return ShiftMode::spatial_only;
        case Variant::no_shift: return ShiftMode::none;
    }
    return ShiftMode::none;
}

// Exponent reported next to each fitted slope. full_shift uses the generic rate
// of smooth data; no_shift is held to the first-order rate like no_time_shift.
inline ExponentVariant variant_exponent(Variant v) {
    return v == Variant::full_shift ? ExponentVariant::improved : ExponentVariant::no_time_shift;
}

struct TimeSchedule {
    double start = 16.0;
    double stop = 1024.0;
    int count = 7;

    void validate() const {
        if (!(start > 0.0)) throw ConfigError("times.start must be > 0");
        if (!(start < stop)) throw ConfigError("times.start must be < times.stop");
        if (count < 3) throw ConfigError("times.count must be >= 3");
    }

    // Geometric points. Values within 1e-12 relative of an integer are snapped to
    // it so schedules like 16..1024 print cleanly.
    std::vector<double> values() const {
        validate();
        std::vector<double> out;
        const double ratio = std::log(stop / start) / (count - 1);
        for (int i = 0; i < count; ++i) {
            double t = i == 0 ? start : (i == count - 1 ? stop : start * std::exp(ratio * i));
            const double r = std::round(t);
            if (r > 0.0 && std::abs(t - r) <= 1e-12 * r) t = r;
            out.push_back(t);
        }
        return out;
    }
};

struct ExperimentConfig {
    int n = 0;
    InitialData data;
    std::optional<int> k;  // nullopt: smallest non-degenerate order
    int k_max = 6;
    std::vector<double> p_values{2.0};
    TimeSchedule times;
    GridSpec grid;
    bool sphere = false;
    std::vector<Variant> variants{Variant::full_shift, Variant::no_time_shift, Variant::no_shift};
    double zero_tol = 1e-12;
    double condition_a_tol = 1e-9;
    std::string output_path;

    bool wants(Variant v) const { return std::find(variants.begin(), variants.end(), v) != variants.end(); }
};

namespace detail {

inline std::vector<TensorTerm> parse_terms(const nlohmann::json& j, int n) {
    if (!j.is_array() || j.empty()) throw ConfigError("data.terms must be a non-empty array");
    std::vector<TensorTerm> out;
    for (const auto& term : j) {
        if (!term.is_array() || static_cast<int>(term.size()) != n)
            throw ConfigError("each data term needs exactly n axis coefficient lists");
        TensorTerm t;
        for (const auto& axis : term) {
            if (!axis.is_array() || axis.empty()) throw ConfigError("axis coefficients must be a non-empty array");
            std::vector<double> c;
            for (const auto& v : axis) {
                if (!v.is_number()) throw ConfigError("axis coefficients must be numbers");
                c.push_back(v.get<double>());
            }
            t.axes.push_back(std::move(c));
        }
        out.push_back(std::move(t));
    }
    return out;
}

inline double parse_p(const nlohmann::json& v) {
    if (v.is_string()) {
        if (v.get<std::string>() == "inf") return p_infinity;
        throw ConfigError("p value must be a number >= 1 or \"inf\"");
    }
    if (!v.is_number() || !(v.get<double>() >= 1.0)) throw ConfigError("p value must be a number >= 1 or \"inf\"");
    return v.get<double>();
}

template <class T>
T get_or(const nlohmann::json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError(std::string("bad type for key '") + key + "'");
    }
}

}  // namespace detail

inline ExperimentConfig parse_config(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    ExperimentConfig c;
    if (!j.contains("n") || !j["n"].is_number_integer()) throw ConfigError("missing integer 'n'");
    c.n = j["n"].get<int>();
    if (c.n < 1) throw ConfigError("n must be >= 1");

    if (!j.contains("data") || !j["data"].is_object()) throw ConfigError("missing 'data' object");
    const auto& d = j["data"];
    const std::string type = detail::get_or<std::string>(d, "type", "");
    if (!d.contains("terms")) throw ConfigError("data.terms is required");
    HermiteGaussianSum sum(c.n, detail::parse_terms(d["terms"], c.n));
    if (type == "hermite_gaussian_sum") {
        c.data = std::move(sum);
    } else if (type == "sampled") {
        SampledData s;
        s.n = c.n;
        s.quad.radius = detail::get_or<double>(d, "radius", 8.0);
        s.quad.nodes = detail::get_or<int>(d, "nodes", 64);
        s.eval = [sum](std::span<const double> x) { return sum(x); };
        try {
            s.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
        c.data = std::move(s);
    } else {
        throw ConfigError("data.type must be \"hermite_gaussian_sum\" or \"sampled\"");
    }

    c.k_max = detail::get_or<int>(j, "k_max", 6);
    if (c.k_max < 0) throw ConfigError("k_max must be >= 0");
    if (j.contains("k")) {
        const auto& k = j["k"];
        if (k.is_string() && k.get<std::string>() == "auto") {
            c.k.reset();
        } else if (k.is_number_integer()) {
            c.k = k.get<int>();
            if (*c.k < 0 || *c.k > c.k_max) throw ConfigError("k must lie in [0, k_max]");
        } else {
            throw ConfigError("k must be an integer or \"auto\"");
        }
    }

    if (j.contains("p_values")) {
        if (!j["p_values"].is_array() || j["p_values"].empty()) throw ConfigError("p_values must be a non-empty array");
        c.p_values.clear();
        for (const auto& v : j["p_values"]) c.p_values.push_back(detail::parse_p(v));
    }

    if (j.contains("times")) {
        const auto& t = j["times"];
        c.times.start = detail::get_or<double>(t, "start", c.times.start);
        c.times.stop = detail::get_or<double>(t, "stop", c.times.stop);
        c.times.count = detail::get_or<int>(t, "count", c.times.count);
    }
    c.times.validate();

    c.grid.points_per_axis = c.n <= 2 ? 129 : (c.n == 3 ? 65 : 33);
    if (j.contains("grid")) {
        const auto& g = j["grid"];
        c.grid.half_width = detail::get_or<double>(g, "half_width", c.grid.half_width);
        c.grid.points_per_axis = detail::get_or<int>(g, "points_per_axis", c.grid.points_per_axis);
    }
    try {
        c.grid.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }

    c.sphere = detail::get_or<bool>(j, "sphere", false);
    if (c.sphere && c.n < 2) throw ConfigError("sphere averages need n >= 2");

    if (j.contains("variants")) {
        if (!j["variants"].is_array()) throw ConfigError("variants must be an array");
        c.variants.clear();
        for (const auto& v : j["variants"]) {
            const std::string s = v.is_string() ? v.get<std::string>() : "";
            if (s == "full_shift") c.variants.push_back(Variant::full_shift);
            else if (s == "no_time_shift") c.variants.push_back(Variant::no_time_shift);
            else if (s == "no_shift") c.variants.push_back(Variant::no_shift);
            else throw ConfigError("unknown variant '" + s + "'");
        }
    }

    if (j.contains("tolerances")) {
        const auto& t = j["tolerances"];
        c.zero_tol = detail::get_or<double>(t, "zero_tol", c.zero_tol);
        c.condition_a_tol = detail::get_or<double>(t, "condition_a_tol", c.condition_a_tol);
    }
    if (!(c.zero_tol >= 0.0) || !(c.condition_a_tol > 0.0)) throw ConfigError("tolerances must be positive");

    c.output_path = detail::get_or<std::string>(j, "output_path", "");
    return c;
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    return parse_config(j);
}

// ---- CSV ----

inline std::string csv_number(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

class CsvWriter {
public:
    explicit CsvWriter(const std::filesystem::path& path) : out_(path, std::ios::binary) {
        if (!out_) throw std::runtime_error("cannot write " + path.string());
    }

    void row(const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) out_ << (i ? "," : "") << csv_field(fields[i]);
        out_ << "\r\n";
    }

private:
    std::ofstream out_;
};

enum class Stage { shifts, check, decay, identities, all };

inline constexpr int exit_ok = 0;
inline constexpr int exit_config = 1;
inline constexpr int exit_condition = 2;

// Solution evaluator at fixed t: closed form for tensor data, quadrature otherwise.
inline PointEvaluator solution_evaluator(const InitialData& f) {
    if (const auto* h = std::get_if<HermiteGaussianSum>(&f)) {
        auto field = GaussianDerivativeField::from_initial(*h);
        return [field](std::span<const double> x, double t) { return field.evolved(t)(x); };
    }
    const auto& s = std::get<SampledData>(f);
    return [s](std::span<const double> x, double t) { return convolution_oracle(s, x, t, s.quad); };
}

namespace detail {

inline void write_shifts(const std::filesystem::path& dir, const MomentTable& table, const ShiftSet& s) {
    CsvWriter w(dir / "shifts.csv");
    std::vector<std::string> head{"k", "alpha", "moment"};
    for (int i = 1; i <= table.dim(); ++i) head.push_back("x_star_" + std::to_string(i));
    for (const char* h : {"c_alpha", "t_star", "offdiag_residual", "diag_spread", "vanishing_residual",
                          "condition_a_holds"})
        head.emplace_back(h);
    w.row(head);
    for (const auto& a : s.lambda_k) {
        std::vector<std::string> r{std::to_string(s.k), a.to_string(), csv_number(table.at(a))};
        for (double x : s.x_star.at(a)) r.push_back(csv_number(x));
        r.push_back(csv_number(s.report.c_alpha.at(a)));
        r.push_back(s.report.holds ? csv_number(s.t_star.at(a)) : "");
        r.push_back(csv_number(s.report.max_offdiag_residual));
        r.push_back(csv_number(s.report.max_diag_spread));
        r.push_back(csv_number(s.report.vanishing_residual));
        r.push_back(s.report.holds ? "true" : "false");
        w.row(r);
    }
}

inline void write_identities(const std::filesystem::path& dir, const MomentTable& table, const ShiftSet& s) {
    CsvWriter w(dir / "identities.csv");
    w.row({"quantity", "value"});
    const auto id = verify_shift_identities(table, s);
    const auto e = error_component_coefficients(table, s, s.k);
    w.row({"k", std::to_string(s.k)});
    w.row({"s", csv_number(id.s)});
    if (id.variance_residual) w.row({"variance_residual", csv_number(*id.variance_residual)});
    w.row({"scaled_residual", csv_number(id.scaled_residual)});
    w.row({"I1_max", csv_number(e.I1_max)});
    w.row({"I21_max", csv_number(e.I21_max)});
    w.row({"I22_max", csv_number(e.I22_max)});
    w.row({"I3_max", csv_number(e.I3_max)});
}

struct DecaySeries {
    std::string name;
    double p;
    double exponent;
    std::vector<double> errors;
};

inline void write_decay(const std::filesystem::path& dir, const std::vector<double>& times,
                        const std::vector<DecaySeries>& series) {
    CsvWriter w(dir / "decay.csv");
    w.row({"t", "p", "variant", "error", "log10_t", "log10_error", "slope", "intercept", "r_squared",
           "expected_exponent", "row_type"});
    for (const auto& s : series) {
        for (std::size_t i = 0; i < times.size(); ++i)
            w.row({csv_number(times[i]), csv_number(s.p), s.name, csv_number(s.errors[i]),
                   csv_number(std::log10(times[i])), csv_number(std::log10(s.errors[i])), "", "", "",
                   csv_number(s.exponent), "sample"});
        std::string slope = "nan", icpt = "nan", r2 = "nan";
        try {
            const auto fit = fit_decay(times, s.errors);
            slope = csv_number(fit.slope);
            icpt = csv_number(fit.intercept);
            r2 = csv_number(fit.r_squared);
        } catch (const std::invalid_argument&) {
            // zero error somewhere: no log-log fit
        }
        w.row({"", csv_number(s.p), s.name, "", "", "", slope, icpt, r2, csv_number(s.exponent), "fit"});
    }
}

inline std::vector<DecaySeries> run_decay(const ExperimentConfig& cfg, const MomentTable& table, const ShiftSet& s,
                                          const std::vector<double>& times, std::ostream& log) {
    const int n = cfg.n;
    const int k = s.k;
    const PointEvaluator u = solution_evaluator(cfg.data);

    struct Profile {
        std::string name;
        ExponentVariant exp;
        PointEvaluator diff;
        double t_min;
    };
    std::vector<Profile> profiles;
    for (Variant v : cfg.variants) {
        if (v == Variant::full_shift && !s.report.holds) continue;
        auto kernel = std::make_shared<ModifiedKernel>(ModifiedKernel::from_shifts(table, s, variant_mode(v)));
        profiles.push_back({variant_name(v), variant_exponent(v),
                            [u, kernel](std::span<const double> x, double t) { return u(x, t) - (*kernel)(x, t); },
                            kernel->t_min()});
    }
    if (cfg.sphere) {
        // [u] against the parity-reduced kernel: time shift only for even k,
        // spatial shift only for odd k. For k = 0 the kernel is radial.
        const SphereQuadrature squad = SphereQuadrature::build(n);
        const PointEvaluator su = radial_sphere_profile(u, squad);
        if (k % 2 == 0 && !s.report.holds) {
            log << "sphere variant skipped: time shifts undefined\n";
        } else {
            auto kernel = std::make_shared<ModifiedKernel>(
                ModifiedKernel::from_shifts(table, s, k % 2 == 0 ? ShiftMode::temporal_only : ShiftMode::spatial_only));
            PointEvaluator sk;
            if (k == 0) {
                const double area = sphere_measure(n);
                sk = [kernel, area](std::span<const double> x, double t) { return area * (*kernel)(x, t); };
            } else {
                sk = radial_sphere_profile([kernel](std::span<const double> x, double t) { return (*kernel)(x, t); },
                                           squad);
            }
            profiles.push_back({"sphere", ExponentVariant::sphere,
                                [su, sk](std::span<const double> x, double t) { return su(x, t) - sk(x, t); },
                                kernel->t_min()});
        }
    }

    for (const auto& pr : profiles)
        if (!(times.front() > pr.t_min))
            throw ConfigError("times.start must exceed max(t*, 0) = " + csv_number(pr.t_min));

    std::vector<DecaySeries> out;
    for (const auto& pr : profiles) {
        std::vector<std::vector<double>> by_time;
        for (double t : times) {
            by_time.push_back(lp_error_norms(pr.diff, t, cfg.grid, n, cfg.p_values));
            log << "  " << pr.name << " t=" << t << " done\n";
        }
        for (std::size_t q = 0; q < cfg.p_values.size(); ++q) {
            DecaySeries ds{pr.name, cfg.p_values[q], expected_exponent(k, n, cfg.p_values[q], pr.exp), {}};
            for (const auto& row : by_time) ds.errors.push_back(row[q]);
            out.push_back(std::move(ds));
        }
    }
    return out;
}

}  // namespace detail

inline void print_violations(const ConditionAReport& rep, std::ostream& os) {
    os << "Condition A fails (tol " << rep.tol << "):\n";
    for (const auto& v : rep.violations) {
        os << "  " << v.kind << " alpha=" << v.alpha.to_string();
        if (v.i >= 0) os << " i=" << v.i + 1;
        if (v.j >= 0) os << " j=" << v.j + 1;
        os << " residual=" << csv_number(v.residual) << "\n";
    }
}

// Runs the requested stage and returns the process exit status.
inline int run_experiment(const ExperimentConfig& cfg, Stage stage, const std::filesystem::path& out_dir,
                          std::ostream& log = std::cerr) {
    const int K = (cfg.k ? *cfg.k : cfg.k_max) + 2;
    const MomentTable table = compute_moment_table(cfg.data, K, cfg.zero_tol);

    int k = 0;
    if (cfg.k) {
        k = *cfg.k;
    } else {
        const auto found = find_min_nondegenerate_order(table, cfg.k_max);
        if (!found) {
            log << "Lambda_k empty up to k_max (k_max = " << cfg.k_max << ")\n";
            return exit_condition;
        }
        k = *found;
    }

    ShiftSet shifts;
    try {
        shifts = derive_shifts(table, k, cfg.condition_a_tol);
    } catch (const EmptyLambdaError& e) {
        log << e.what() << "\n";
        return exit_condition;
    }

    std::filesystem::create_directories(out_dir);
    const bool all = stage == Stage::all;
    if (all || stage == Stage::shifts || stage == Stage::check) detail::write_shifts(out_dir, table, shifts);

    if (stage == Stage::check) {
        log << "k = " << k << ", |Lambda_k| = " << shifts.lambda_k.size() << ", Condition A "
            << (shifts.report.holds ? "holds" : "fails") << "\n";
    }
    if (!shifts.report.holds) {
        print_violations(shifts.report, log);
        if (cfg.wants(Variant::full_shift)) return exit_condition;
    }

    if (all || stage == Stage::identities) {
        if (shifts.report.holds)
            detail::write_identities(out_dir, table, shifts);
        else
            log << "identities skipped: time shifts undefined\n";
    }

    if (all || stage == Stage::decay) {
        const auto times = cfg.times.values();
        log << "decay: k = " << k << "\n";
        detail::write_decay(out_dir, times, detail::run_decay(cfg, table, shifts, times, log));
    }
    return exit_ok;
}

}  // namespace heatshift
