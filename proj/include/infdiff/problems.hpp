#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "batch.hpp"
#include "errors.hpp"
#include "jet.hpp"
#include "series.hpp"

namespace infdiff {

// eps-series whose coefficients are spatial jets: the state type of the
// time-derivative driver.
using JetSeries = TruncatedSeries<SpatialJet>;
// eps-series with scalar coefficients, used for the time argument.
using TimeSeries = TruncatedSeries<double>;

// Arguments of a right-hand side F(U, U_x, U_xx, t, x). All series share one
// order; u, ux and uxx hold one entry per component.
struct PdeState {
    std::span<const JetSeries> u;
    std::span<const JetSeries> ux;
    std::span<const JetSeries> uxx;
    const TimeSeries& t;
    const SpatialJet& x;
};

// Same arguments in plain doubles on a whole grid, indexed [component][node].
struct GridState {
    std::span<const std::vector<double>> u;
    std::span<const std::vector<double>> ux;
    std::span<const std::vector<double>> uxx;
    double t;
    std::span<const double> x;
};

using InitialCondition = std::function<std::vector<SpatialJet>(const SpatialJet& x)>;
using RightHandSide = std::function<std::vector<JetSeries>(const PdeState&)>;
using PointInitialCondition = std::function<std::vector<double>(double x)>;
using GridRightHandSide = std::function<void(const GridState&, std::span<std::vector<double>> out)>;
using ExactSolution = std::function<std::vector<double>(double t, double x)>;
using ExactTimeDerivative = std::function<std::vector<double>(int order, double t, double x)>;

struct Interval {
    double lower;
    double upper;

    bool contains_strictly(double x) const { return lower < x && x < upper; }
    double length() const { return upper - lower; }
};

enum class Boundary { dirichlet_zero, periodic };

using Params = std::map<std::string, double, std::less<>>;

// A first-order-in-time PDE system U_t = F(U, U_x, U_xx, t, x) on an interval
// with initial condition U(0, x) = g(x). Higher-order-in-time equations are
// registered after reduction to first order, so `components` may exceed
// `solution_components` (the leading components that are the physical unknowns).
//
// `initial` and `rhs` are written entirely in series/jet arithmetic so that
// every eps-coefficient propagates. `initial_value` and `grid_rhs` restate
// the same problem in plain doubles for the method-of-lines reference, which
// must not share code with the series path.
struct PdeProblem {
    std::string name;
    std::size_t components = 1;
    std::size_t solution_components = 1;
    Interval domain{0.0, 1.0};
    double t_end = 1.0;
    Params params;
    // Highest spatial derivative order appearing in F.
    std::size_t spatial_order = 2;
    Boundary boundary = Boundary::dirichlet_zero;

    InitialCondition initial;
    RightHandSide rhs;
    PointInitialCondition initial_value;
    GridRightHandSide grid_rhs;

    // Closed-form oracles, present only where the solution is known.
    std::optional<ExactSolution> exact_solution;
    std::optional<ExactTimeDerivative> exact_time_derivative;

    bool has_exact_oracle() const { return exact_solution.has_value() && exact_time_derivative.has_value(); }
};

inline void validate(const PdeProblem& p)
{
    if (!(p.domain.lower < p.domain.upper)) {
        throw contract_violation(p.name + ": empty domain");
    }
    if (!(p.t_end > 0.0)) {
        throw contract_violation(p.name + ": t_end must be positive");
    }
    if (p.components < 1 || p.solution_components < 1 || p.solution_components > p.components) {
        throw contract_violation(p.name + ": invalid component counts");
    }
    if (!p.initial || !p.rhs || !p.initial_value || !p.grid_rhs) {
        throw contract_violation(p.name + ": missing evaluator");
    }
}

inline constexpr std::array<std::string_view, 6> problem_names{
    "heat", "diffusion", "wave", "burgers", "allen_cahn", "schrodinger",
};

namespace detail {

constexpr double pi = std::numbers::pi;

inline Params merge_params(std::string_view problem, Params defaults, const Params& overrides)
{
    for (const auto& [key, value] : overrides) {
        auto it = defaults.find(key);
        if (it == defaults.end()) {
            std::string valid;
            for (const auto& [k, v] : defaults) {
                valid += (valid.empty() ? "" : ", ") + k;
            }
            throw lookup_error("unknown parameter '" + key + "' for problem " + std::string(problem)
                               + " (valid: " + (valid.empty() ? "none" : valid) + ")");
        }
        it->second = value;
    }
    return defaults;
}

// U_t = alpha U_xx on [0, L], U(0, x) = sin(n pi x / L).
inline PdeProblem make_heat(const Params& overrides)
{
    PdeProblem p;
    p.name = "heat";
    p.params = merge_params(p.name, {{"alpha", 0.4}, {"L", 1.0}, {"n", 1.0}}, overrides);
    const double alpha = p.params.at("alpha");
    const double length = p.params.at("L");
    const double wavenumber = p.params.at("n") * pi / length;
    const double rate = -wavenumber * wavenumber * alpha;

    p.domain = {0.0, length};
    p.t_end = 1.0;
    p.boundary = Boundary::dirichlet_zero;
    p.initial = [wavenumber](const SpatialJet& x) { return std::vector<SpatialJet>{sin(x * wavenumber)}; };
    p.rhs = [alpha](const PdeState& s) { return std::vector<JetSeries>{s.uxx[0] * alpha}; };
    p.initial_value = [wavenumber](double x) { return std::vector<double>{std::sin(wavenumber * x)}; };
    p.grid_rhs = [alpha](const GridState& s, std::span<std::vector<double>> out) {
        for (std::size_t j = 0; j < s.x.size(); ++j) {
            out[0][j] = alpha * s.uxx[0][j];
        }
    };
    p.exact_solution = [wavenumber, rate](double t, double x) {
        return std::vector<double>{std::exp(rate * t) * std::sin(wavenumber * x)};
    };
    // d^i U / dt^i = (-n^2 pi^2 alpha / L^2)^i U
    p.exact_time_derivative = [wavenumber, rate](int i, double t, double x) {
        const double u = std::exp(rate * t) * std::sin(wavenumber * x);
        return std::vector<double>{std::pow(rate, i) * u};
    };
    return p;
}

// U_t = U_xx - e^{-t} (sin(pi x) - pi^2 sin(pi x)) on [-1, 1], U(0, x) = sin(pi x).
// The oracle is the exact solution e^{-t} sin(pi x), forcing included.
inline PdeProblem make_diffusion(const Params& overrides)
{
    PdeProblem p;
    p.name = "diffusion";
    p.params = merge_params(p.name, {}, overrides);
    p.domain = {-1.0, 1.0};
    p.t_end = 1.0;
    p.boundary = Boundary::dirichlet_zero;
    p.initial = [](const SpatialJet& x) { return std::vector<SpatialJet>{sin(x * pi)}; };
    p.rhs = [](const PdeState& s) {
        const SpatialJet sx = sin(s.x * pi);
        const SpatialJet forcing = sx - sx * (pi * pi);
        return std::vector<JetSeries>{s.uxx[0] - broadcast(exp(-s.t), forcing)};
    };
    p.initial_value = [](double x) { return std::vector<double>{std::sin(pi * x)}; };
    p.grid_rhs = [](const GridState& s, std::span<std::vector<double>> out) {
        const double decay = std::exp(-s.t);
        for (std::size_t j = 0; j < s.x.size(); ++j) {
            const double sx = std::sin(pi * s.x[j]);
            out[0][j] = s.uxx[0][j] - decay * (sx - pi * pi * sx);
        }
    };
    p.exact_solution = [](double t, double x) { return std::vector<double>{std::exp(-t) * std::sin(pi * x)}; };
    p.exact_time_derivative = [](int i, double t, double x) {
        const double sign = (i % 2 == 0) ? 1.0 : -1.0;
        const double u = std::exp(-t) * std::sin(pi * x);
        return std::vector<double>{sign * u};
    };
    return p;
}

// U_tt = C^2 U_xx on [0, 1], reduced to U_t = V, V_t = C^2 U_xx with
// U(0, x) = sin(pi x) + sin(A pi x), V(0, x) = 0.
inline PdeProblem make_wave(const Params& overrides)
{
    PdeProblem p;
    p.name = "wave";
    p.params = merge_params(p.name, {{"A", 1.0}, {"C", 1.0}}, overrides);
    const double a = p.params.at("A");
    const double c = p.params.at("C");

    p.components = 2;
    p.solution_components = 1;
    p.domain = {0.0, 1.0};
    p.t_end = 1.0;
    p.boundary = Boundary::dirichlet_zero;
    p.initial = [a](const SpatialJet& x) {
        SpatialJet u = sin(x * pi) + sin(x * (a * pi));
        SpatialJet v = SpatialJet::zero(x[0], x.order());
        return std::vector<SpatialJet>{std::move(u), std::move(v)};
    };
    p.rhs = [c](const PdeState& s) { return std::vector<JetSeries>{s.u[1], s.uxx[0] * (c * c)}; };
    p.initial_value = [a](double x) { return std::vector<double>{std::sin(pi * x) + std::sin(a * pi * x), 0.0}; };
    p.grid_rhs = [c](const GridState& s, std::span<std::vector<double>> out) {
        for (std::size_t j = 0; j < s.x.size(); ++j) {
            out[0][j] = s.u[1][j];
            out[1][j] = c * c * s.uxx[0][j];
        }
    };

    // d^i U / dt^i = (C pi)^i sin(pi x) f1(t) + (A C pi)^i sin(A pi x) f2(t),
    // with (f1, f2) cycling through cos, -sin, -cos, sin as i mod 4 = 0..3.
    auto u_derivative = [a, c](int i, double t, double x) {
        const double w1 = c * pi;
        const double w2 = a * c * pi;
        double f1 = 0.0;
        double f2 = 0.0;
        switch (i % 4) {
        case 0:
            f1 = std::cos(w1 * t);
            f2 = std::cos(w2 * t);
            break;
        case 1:
            f1 = -std::sin(w1 * t);
            f2 = -std::sin(w2 * t);
            break;
        case 2:
            f1 = -std::cos(w1 * t);
            f2 = -std::cos(w2 * t);
            break;
        default:
            f1 = std::sin(w1 * t);
            f2 = std::sin(w2 * t);
            break;
        }
        return std::pow(w1, i) * std::sin(pi * x) * f1 + std::pow(w2, i) * std::sin(a * pi * x) * f2;
    };
    p.exact_solution = [u_derivative](double t, double x) {
        return std::vector<double>{u_derivative(0, t, x), u_derivative(1, t, x)};
    };
    p.exact_time_derivative = [u_derivative](int i, double t, double x) {
        return std::vector<double>{u_derivative(i, t, x), u_derivative(i + 1, t, x)};
    };
    return p;
}

// U_t = -U U_x + nu U_xx on [-1, 1], U(0, x) = -sin(pi x), U(t, +-1) = 0.
inline PdeProblem make_burgers(const Params& overrides)
{
    PdeProblem p;
    p.name = "burgers";
    p.params = merge_params(p.name, {{"nu", 0.01 / pi}}, overrides);
    const double nu = p.params.at("nu");
    p.domain = {-1.0, 1.0};
    p.t_end = 1.0;
    p.boundary = Boundary::dirichlet_zero;
    p.initial = [](const SpatialJet& x) { return std::vector<SpatialJet>{-sin(x * pi)}; };
    p.rhs = [nu](const PdeState& s) { return std::vector<JetSeries>{-(s.u[0] * s.ux[0]) + s.uxx[0] * nu}; };
    p.initial_value = [](double x) { return std::vector<double>{-std::sin(pi * x)}; };
    p.grid_rhs = [nu](const GridState& s, std::span<std::vector<double>> out) {
        for (std::size_t j = 0; j < s.x.size(); ++j) {
            out[0][j] = -s.u[0][j] * s.ux[0][j] + nu * s.uxx[0][j];
        }
    };
    return p;
}

// U_t = d U_xx + 5 (U - U^3) on [-1, 1], periodic, U(0, x) = x^2 cos(pi x).
inline PdeProblem make_allen_cahn(const Params& overrides)
{
    PdeProblem p;
    p.name = "allen_cahn";
    p.params = merge_params(p.name, {{"d", 0.0001}}, overrides);
    const double d = p.params.at("d");
    p.domain = {-1.0, 1.0};
    p.t_end = 1.0;
    p.boundary = Boundary::periodic;
    p.initial = [](const SpatialJet& x) { return std::vector<SpatialJet>{x * x * cos(x * pi)}; };
    p.rhs = [d](const PdeState& s) {
        const JetSeries& u = s.u[0];
        return std::vector<JetSeries>{s.uxx[0] * d + (u - u * u * u) * 5.0};
    };
    p.initial_value = [](double x) { return std::vector<double>{x * x * std::cos(pi * x)}; };
    p.grid_rhs = [d](const GridState& s, std::span<std::vector<double>> out) {
        for (std::size_t j = 0; j < s.x.size(); ++j) {
            const double u = s.u[0][j];
            out[0][j] = d * s.uxx[0][j] + 5.0 * (u - u * u * u);
        }
    };
    return p;
}

// i h_t = -0.5 h_xx - |h|^2 h on [-5, 5], periodic, h(0, x) = 2 sech(x),
// split into h = U + iV:
//   U_t = -0.5 V_xx - (U^2 + V^2) V
//   V_t =  0.5 U_xx + (U^2 + V^2) U
inline PdeProblem make_schrodinger(const Params& overrides)
{
    PdeProblem p;
    p.name = "schrodinger";
    p.params = merge_params(p.name, {}, overrides);
    p.components = 2;
    p.solution_components = 2;
    p.domain = {-5.0, 5.0};
    p.t_end = pi / 2.0;
    p.boundary = Boundary::periodic;
    p.initial = [](const SpatialJet& x) {
        return std::vector<SpatialJet>{sech(x) * 2.0, SpatialJet::zero(x[0], x.order())};
    };
    p.rhs = [](const PdeState& s) {
        const JetSeries& u = s.u[0];
        const JetSeries& v = s.u[1];
        const JetSeries modulus2 = u * u + v * v;
        return std::vector<JetSeries>{s.uxx[1] * (-0.5) - modulus2 * v, s.uxx[0] * 0.5 + modulus2 * u};
    };
    p.initial_value = [](double x) { return std::vector<double>{2.0 / std::cosh(x), 0.0}; };
    p.grid_rhs = [](const GridState& s, std::span<std::vector<double>> out) {
        for (std::size_t j = 0; j < s.x.size(); ++j) {
            const double u = s.u[0][j];
            const double v = s.u[1][j];
            const double modulus2 = u * u + v * v;
            out[0][j] = -0.5 * s.uxx[1][j] - modulus2 * v;
            out[1][j] = 0.5 * s.uxx[0][j] + modulus2 * u;
        }
    };
    return p;
}

} // namespace detail

// Looks up a built-in problem by name, applying parameter overrides.
inline PdeProblem registry_get(std::string_view name, const Params& overrides = {})
{
    PdeProblem p;
    if (name == "heat") {
        p = detail::make_heat(overrides);
    } else if (name == "diffusion") {
        p = detail::make_diffusion(overrides);
    } else if (name == "wave") {
        p = detail::make_wave(overrides);
    } else if (name == "burgers") {
        p = detail::make_burgers(overrides);
    } else if (name == "allen_cahn") {
        p = detail::make_allen_cahn(overrides);
    } else if (name == "schrodinger") {
        p = detail::make_schrodinger(overrides);
    } else {
        std::string valid;
        for (auto n : problem_names) {
            valid += (valid.empty() ? "" : ", ") + std::string(n);
        }
        throw lookup_error("unknown problem '" + std::string(name) + "' (valid: " + valid + ")");
    }
    validate(p);
    return p;
}

inline std::vector<double> exact_derivative(const PdeProblem& problem, int order, double t, double x)
{
    if (!problem.exact_time_derivative) {
        throw no_exact_oracle("no exact oracle for problem " + problem.name);
    }
    return (*problem.exact_time_derivative)(order, t, x);
}

inline std::vector<double> exact_solution(const PdeProblem& problem, double t, double x)
{
    if (!problem.exact_solution) {
        throw no_exact_oracle("no exact oracle for problem " + problem.name);
    }
    return (*problem.exact_solution)(t, x);
}

} // namespace infdiff
