#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "batch.hpp"
#include "errors.hpp"
#include "problems.hpp"

namespace infdiff {

// Normalized root-mean-square error
//
//   NRMSE = (1/N) * ||y_true - y_approx||_2 / (max(y_true) - min(y_true) + 1)
//
// taken literally: 1/N sits outside the norm and the +1 regularizes the range.
// It is not scale invariant.
inline double nrmse(std::span<const double> y_true, std::span<const double> y_approx)
{
    if (y_true.size() != y_approx.size() || y_true.empty()) {
        throw contract_violation("nrmse needs two non-empty inputs of equal length");
    }
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        const double d = y_true[i] - y_approx[i];
        sum_sq += d * d;
    }
    const auto [lo, hi] = std::minmax_element(y_true.begin(), y_true.end());
    const double n = static_cast<double>(y_true.size());
    return (std::sqrt(sum_sq) / n) / (*hi - *lo + 1.0);
}

inline double nrmse(const BatchReal& y_true, const BatchReal& y_approx)
{
    return nrmse(y_true.values(), y_approx.values());
}

// Euclidean norm of the solution components of g at x; |g(x)| for scalar
// problems, |h(0, x)| for the real/imaginary split.
inline double initial_magnitude(const PdeProblem& problem, double x)
{
    const auto g = problem.initial_value(x);
    double sum_sq = 0.0;
    for (std::size_t m = 0; m < problem.solution_components; ++m) {
        sum_sq += g[m] * g[m];
    }
    return std::sqrt(sum_sq);
}

// max |g| scanned on a fine uniform grid.
inline double max_abs_initial(const PdeProblem& problem, int grid = 10001)
{
    double best = 0.0;
    for (int j = 0; j < grid; ++j) {
        const double x = problem.domain.lower + problem.domain.length() * j / (grid - 1);
        best = std::max(best, initial_magnitude(problem, x));
    }
    return best;
}

inline double default_exclusion(const PdeProblem& problem)
{
    return 0.1 * max_abs_initial(problem);
}

// `count` seeded uniform draws from the open domain, keeping only points with
// |g(x)| > tau. tau = 0 disables the
// exclusion; without tau the default 0.1 * max|g| applies.
inline BatchReal sample_points(const PdeProblem& problem, int count, std::optional<double> tau, std::uint64_t seed)
{
    if (count < 1) {
        throw contract_violation("point count must be at least 1");
    }
    const double threshold = tau.value_or(default_exclusion(problem));
    if (threshold < 0.0 || !(threshold < max_abs_initial(problem))) {
        throw contract_violation("exclusion threshold must lie in [0, max|g|)");
    }

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(problem.domain.lower, problem.domain.upper);
    std::vector<double> points;
    points.reserve(count);
    const long max_draws = 10L * count;
    for (long draw = 0; draw < max_draws && static_cast<int>(points.size()) < count; ++draw) {
        const double x = dist(rng);
        if (!problem.domain.contains_strictly(x)) {
            continue;
        }
        if (threshold == 0.0 || initial_magnitude(problem, x) > threshold) {
            points.push_back(x);
        }
    }
    if (static_cast<int>(points.size()) < count) {
        throw sampling_error("found only " + std::to_string(points.size()) + " of " + std::to_string(count)
                             + " points outside the exclusion region of " + problem.name);
    }
    return BatchReal(std::move(points));
}

// Cell midpoints of a uniform partition of the domain into `count` cells.
inline BatchReal uniform_points(const PdeProblem& problem, int count)
{
    if (count < 1) {
        throw contract_violation("point count must be at least 1");
    }
    std::vector<double> points(count);
    const double h = problem.domain.length() / count;
    for (int j = 0; j < count; ++j) {
        points[j] = problem.domain.lower + (j + 0.5) * h;
    }
    return BatchReal(std::move(points));
}

} // namespace infdiff
