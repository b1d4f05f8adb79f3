#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "batch.hpp"
#include "errors.hpp"
#include "io.hpp"
#include "metrics.hpp"
#include "problems.hpp"
#include "taylor.hpp"

namespace infdiff {

struct TaylorError {
    double t1 = 0.0;
    double nrmse = 0.0;
};

struct BenchReport {
    std::string problem;
    int max_order = 0;
    std::vector<double> derivative_nrmse;  // orders 0..K
    std::vector<double> coefficient_nrmse; // orders 0..K
    std::vector<TaylorError> taylor_nrmse;
    BatchReal points;
    double runtime_seconds = 0.0;
};

namespace detail {

// Solution components of every point, component-major.
template <class Oracle>
BatchReal stacked_exact(const PdeProblem& problem, const BatchReal& points, Oracle&& oracle)
{
    std::vector<std::vector<double>> per_component(problem.solution_components);
    for (double x : points) {
        const auto v = oracle(x);
        for (std::size_t m = 0; m < problem.solution_components; ++m) {
            per_component[m].push_back(v[m]);
        }
    }
    std::vector<double> out;
    for (const auto& c : per_component) {
        out.insert(out.end(), c.begin(), c.end());
    }
    return BatchReal(std::move(out));
}

inline BatchReal stacked_approx(const PdeProblem& problem, const std::vector<BatchReal>& per_component)
{
    std::vector<double> out;
    for (std::size_t m = 0; m < problem.solution_components; ++m) {
        out.insert(out.end(), per_component[m].begin(), per_component[m].end());
    }
    return BatchReal(std::move(out));
}

} // namespace detail

// Expansion at sampled points compared against the exact oracles: derivatives
// and raw coefficients per order, Taylor evaluation per t1.
inline BenchReport run_benchmark(const PdeProblem& problem, int max_order, int point_count,
                                 std::span<const double> t1_list, std::uint64_t seed,
                                 std::optional<double> tau = std::nullopt)
{
    if (!problem.has_exact_oracle()) {
        throw no_exact_oracle(problem.name + " has no closed-form solution");
    }
    const auto start = std::chrono::steady_clock::now();

    BenchReport report;
    report.problem = problem.name;
    report.max_order = max_order;
    report.points = sample_points(problem, point_count, tau, seed);

    const TaylorExpansion expansion = compute_expansion(problem, report.points, max_order);
    const auto derivs = derivatives(expansion);

    for (int i = 0; i <= max_order; ++i) {
        const BatchReal exact = detail::stacked_exact(
            problem, report.points, [&](double x) { return exact_derivative(problem, i, 0.0, x); });
        std::vector<BatchReal> approx_d;
        std::vector<BatchReal> approx_c;
        for (std::size_t m = 0; m < problem.solution_components; ++m) {
            approx_d.push_back(derivs[m][i]);
            approx_c.push_back(expansion.coeffs[m][i]);
        }
        report.derivative_nrmse.push_back(nrmse(exact, detail::stacked_approx(problem, approx_d)));
        report.coefficient_nrmse.push_back(nrmse(exact / factorial(i), detail::stacked_approx(problem, approx_c)));
    }

    for (double t1 : t1_list) {
        const BatchReal exact = detail::stacked_exact(problem, report.points,
                                                      [&](double x) { return exact_solution(problem, t1, x); });
        const auto values = evaluate(expansion, t1);
        report.taylor_nrmse.push_back({t1, nrmse(exact, detail::stacked_approx(problem, values))});
    }

    report.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

// A report cell outside its acceptance bound.
struct ThresholdViolation {
    std::string cell;
    double value = 0.0;
    std::string bound;
};

namespace detail {

inline std::string short_real(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

inline void check_upper(std::vector<ThresholdViolation>& out, const std::string& cell, double value, double bound)
{
    if (!(value <= bound)) {
        out.push_back({cell, value, "<= " + short_real(bound)});
    }
}

inline std::optional<double> taylor_bound(const std::string& problem, double t1)
{
    struct Row {
        double t1, heat, diffusion, wave;
    };
    static constexpr Row rows[] = {
        {0.01, 1e-14, 1e-15, 1e-14},
        {0.05, 1e-13, 1e-15, 1e-14},
        {0.1, 1e-11, 1e-15, 1e-13},
    };
    for (const auto& r : rows) {
        if (std::abs(r.t1 - t1) < 1e-12) {
            if (problem == "heat") return r.heat;
            if (problem == "diffusion") return r.diffusion;
            if (problem == "wave") return r.wave;
        }
    }
    return std::nullopt;
}

} // namespace detail

// Acceptance bounds for heat, diffusion and wave. Orders above 10 and t1
// values outside {0.01, 0.05, 0.1} are reported but carry no bound.
inline std::vector<ThresholdViolation> threshold_violations(const BenchReport& report)
{
    std::vector<ThresholdViolation> out;
    const int top = std::min(report.max_order, 10);
    const auto& name = report.problem;
    const auto cell = [&](const char* kind, int i) { return name + " " + kind + " order " + std::to_string(i); };

    if (name == "heat") {
        for (int i = 1; i <= top; ++i) {
            detail::check_upper(out, cell("derivative", i), report.derivative_nrmse[i], 1e-14);
        }
    } else if (name == "wave") {
        for (int i = 0; i <= top; ++i) {
            if (i % 2 == 0) {
                detail::check_upper(out, cell("derivative", i), report.derivative_nrmse[i], 1e-14);
            } else if (report.derivative_nrmse[i] != 0.0) {
                out.push_back({cell("derivative", i), report.derivative_nrmse[i], "== 0"});
            }
        }
    } else if (name == "diffusion") {
        for (int i = 0; i <= top; ++i) {
            detail::check_upper(out, cell("coefficient", i), report.coefficient_nrmse[i], 1e-12);
        }
        if (report.max_order >= 10) {
            const double v = report.derivative_nrmse[10];
            if (!(v >= 1e-9 && v <= 1e-5)) {
                out.push_back({cell("derivative", 10), v, "in [1.000e-09, 1.000e-05]"});
            }
        }
    }
    for (const auto& [t1, value] : report.taylor_nrmse) {
        if (const auto bound = detail::taylor_bound(name, t1)) {
            detail::check_upper(out, name + " taylor t1=" + detail::short_real(t1), value, *bound);
        }
    }
    return out;
}

// metric,key,value rows with 17 significant digits. Runtime is left out so
// that repeated runs give identical files.
inline void write_report_csv(std::ostream& os, const BenchReport& report)
{
    os << "metric,key,value\n";
    for (std::size_t i = 0; i < report.derivative_nrmse.size(); ++i) {
        os << "derivative_nrmse," << i << ',' << format_real(report.derivative_nrmse[i]) << '\n';
    }
    for (std::size_t i = 0; i < report.coefficient_nrmse.size(); ++i) {
        os << "coefficient_nrmse," << i << ',' << format_real(report.coefficient_nrmse[i]) << '\n';
    }
    for (const auto& [t1, value] : report.taylor_nrmse) {
        os << "taylor_nrmse," << format_real(t1) << ',' << format_real(value) << '\n';
    }
    for (std::size_t p = 0; p < report.points.size(); ++p) {
        os << "point," << p << ',' << format_real(report.points[p]) << '\n';
    }
}

namespace detail {

inline std::string pad(const std::string& s, std::size_t width)
{
    return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

} // namespace detail

// Orders as rows; a derivative and a coefficient column per report.
inline void write_order_table(std::ostream& os, std::span<const BenchReport> reports)
{
    constexpr std::size_t w = 18;
    os << detail::pad("order", 6);
    int rows = 0;
    for (const auto& r : reports) {
        os << detail::pad(r.problem + " deriv", w) << detail::pad(r.problem + " coeff", w);
        rows = std::max(rows, r.max_order);
    }
    os << '\n';
    for (int i = 0; i <= rows; ++i) {
        os << detail::pad(std::to_string(i), 6);
        for (const auto& r : reports) {
            if (i <= r.max_order) {
                os << detail::pad(detail::short_real(r.derivative_nrmse[i]), w)
                   << detail::pad(detail::short_real(r.coefficient_nrmse[i]), w);
            } else {
                os << detail::pad("-", w) << detail::pad("-", w);
            }
        }
        os << '\n';
    }
}

// t1 values as rows; one column per report.
inline void write_taylor_table(std::ostream& os, std::span<const BenchReport> reports)
{
    constexpr std::size_t w = 14;
    os << detail::pad("t1", 8);
    std::vector<double> times;
    for (const auto& r : reports) {
        os << detail::pad(r.problem, w);
        for (const auto& e : r.taylor_nrmse) {
            if (std::find_if(times.begin(), times.end(), [&](double t) { return t == e.t1; }) == times.end()) {
                times.push_back(e.t1);
            }
        }
    }
    os << '\n';
    for (double t : times) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%g", t);
        os << detail::pad(buf, 8);
        for (const auto& r : reports) {
            std::string v = "-";
            for (const auto& e : r.taylor_nrmse) {
                if (e.t1 == t) {
                    v = detail::short_real(e.nrmse);
                }
            }
            os << detail::pad(v, w);
        }
        os << '\n';
    }
}

} // namespace infdiff
