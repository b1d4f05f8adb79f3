#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <future>
#include <string>
#include <vector>

#include "batch.hpp"
#include "errors.hpp"
#include "jet.hpp"
#include "problems.hpp"
#include "series.hpp"

namespace infdiff {

// 21! is the first factorial that is not exactly representable as a double.
inline constexpr int max_supported_order = 20;

// Taylor expansion of U(t, X) around t = 0 for every component and point:
// U_m(t, X) ~ sum_i coeffs[m][i] * t^i, where coeffs[m][i] is the i-th time
// derivative divided by i!.
struct TaylorExpansion {
    BatchReal points;
    std::size_t components = 0;
    int max_order = 0;
    std::vector<std::vector<BatchReal>> coeffs;
    // Spatial jet of every coefficient; entries above the valid jet order
    // (see valid_jet_order) carry no information.
    std::vector<std::vector<SpatialJet>> jet_tails;
    std::size_t jet_order = 0;
    std::size_t spatial_order = 2;

    // Highest jet entry of coefficient i that is exact.
    std::size_t valid_jet_order(int i) const
    {
        const std::size_t used = spatial_order * static_cast<std::size_t>(i);
        return used > jet_order ? 0 : jet_order - used;
    }
};

// Every application of F consumes spatial_order jet orders, so coefficient K
// needs spatial_order * K of them; one extra block keeps U_x and U_xx of the
// last coefficient exact as well.
inline std::size_t required_jet_order(const PdeProblem& problem, int max_order)
{
    return problem.spatial_order * static_cast<std::size_t>(max_order) + problem.spatial_order;
}

inline double factorial(int n)
{
    double f = 1.0;
    for (int i = 2; i <= n; ++i) {
        f *= static_cast<double>(i);
    }
    return f;
}

namespace detail {

inline void check_expansion_request(const PdeProblem& problem, const BatchReal& points, int max_order)
{
    if (max_order < 1 || max_order > max_supported_order) {
        throw contract_violation("maximum order must lie in [1, " + std::to_string(max_supported_order)
                                 + "], got " + std::to_string(max_order));
    }
    if (points.empty()) {
        throw contract_violation("no sample points");
    }
    for (double x : points) {
        if (!problem.domain.contains_strictly(x)) {
            throw contract_violation("sample point " + std::to_string(x) + " is not strictly inside the domain of "
                                     + problem.name);
        }
    }
}

inline SpatialJet padded_derivative(const SpatialJet& jet, std::size_t m)
{
    return derivative_extract(jet, m).truncated(jet.order());
}

inline bool jet_prefix_finite(const SpatialJet& jet, std::size_t upto)
{
    for (std::size_t k = 0; k <= std::min(upto, jet.order()); ++k) {
        if (!algebra_traits<BatchReal>::all_finite(jet[k])) {
            return false;
        }
    }
    return true;
}

} // namespace detail

// Builds the Taylor expansion of U(t, X) around t = 0 up to order K.
//
// The state u is an eps-series whose coefficients are spatial jets. It starts
// as g(X) and gains one coefficient per iteration i = 1..K:
//
//   F(u, u', u'', h, X) evaluated up to eps^{i-1}  ->  C_i = F_{i-1} / i
//
// with h = eps, passed to F as the time argument. Only the jet derivatives of
// the newest coefficient are computed each iteration; older ones are kept.
inline TaylorExpansion compute_expansion(const PdeProblem& problem, const BatchReal& points, int max_order)
{
    detail::check_expansion_request(problem, points, max_order);
    const std::size_t m_count = problem.components;
    const std::size_t jet_order = required_jet_order(problem, max_order);
    const SpatialJet x = seed_variable(points, jet_order);

    std::vector<SpatialJet> initial = problem.initial(x);
    if (initial.size() != m_count) {
        throw contract_violation(problem.name + ": initial condition returned " + std::to_string(initial.size())
                                 + " components, expected " + std::to_string(m_count));
    }

    std::vector<std::vector<SpatialJet>> u(m_count);
    std::vector<std::vector<SpatialJet>> ux(m_count);
    std::vector<std::vector<SpatialJet>> uxx(m_count);
    for (std::size_t m = 0; m < m_count; ++m) {
        if (initial[m].order() != jet_order || initial[m][0].size() != points.size()) {
            throw contract_violation(problem.name + ": initial condition jet has the wrong shape");
        }
        u[m].reserve(max_order + 1);
        u[m].push_back(std::move(initial[m]));
    }

    TaylorExpansion result;
    result.jet_order = jet_order;
    result.spatial_order = problem.spatial_order;

    for (int i = 1; i <= max_order; ++i) {
        const std::size_t n = static_cast<std::size_t>(i - 1);
        for (std::size_t m = 0; m < m_count; ++m) {
            ux[m].push_back(detail::padded_derivative(u[m][n], 1));
            uxx[m].push_back(detail::padded_derivative(u[m][n], 2));
        }

        std::vector<JetSeries> us;
        std::vector<JetSeries> uxs;
        std::vector<JetSeries> uxxs;
        for (std::size_t m = 0; m < m_count; ++m) {
            us.emplace_back(u[m]);
            uxs.emplace_back(ux[m]);
            uxxs.emplace_back(uxx[m]);
        }
        const TimeSeries h = TimeSeries::variable(0.0, n);
        const PdeState state{us, uxs, uxxs, h, x};

        const std::vector<JetSeries> f = problem.rhs(state);
        if (f.size() != m_count) {
            throw contract_violation(problem.name + ": right-hand side returned " + std::to_string(f.size())
                                     + " components, expected " + std::to_string(m_count));
        }
        for (std::size_t m = 0; m < m_count; ++m) {
            if (f[m].order() != n) {
                throw contract_violation(problem.name + ": right-hand side changed the series order");
            }
            SpatialJet next = f[m][n] / static_cast<double>(i);
            if (!detail::jet_prefix_finite(next, result.valid_jet_order(i))) {
                throw divergence_error(i, problem.name + ": non-finite Taylor coefficient at order "
                                              + std::to_string(i) + " (component " + std::to_string(m) + ")");
            }
            u[m].push_back(std::move(next));
        }
    }

    result.points = points;
    result.components = m_count;
    result.max_order = max_order;
    result.coeffs.resize(m_count);
    for (std::size_t m = 0; m < m_count; ++m) {
        for (const auto& jet : u[m]) {
            result.coeffs[m].push_back(jet[0]);
        }
    }
    result.jet_tails = std::move(u);
    return result;
}

// [component][order] time derivatives i! * C_i.
inline std::vector<std::vector<BatchReal>> derivatives(const TaylorExpansion& expansion)
{
    std::vector<std::vector<BatchReal>> out(expansion.components);
    for (std::size_t m = 0; m < expansion.components; ++m) {
        for (int i = 0; i <= expansion.max_order; ++i) {
            out[m].push_back(expansion.coeffs[m][i] * factorial(i));
        }
    }
    return out;
}

// U(t1, X) per component by Horner evaluation of the expansion.
inline std::vector<BatchReal> evaluate(const TaylorExpansion& expansion, double t1)
{
    if (!(t1 >= 0.0)) {
        throw contract_violation("evaluation time must be non-negative");
    }
    std::vector<BatchReal> out;
    out.reserve(expansion.components);
    for (std::size_t m = 0; m < expansion.components; ++m) {
        const auto& c = expansion.coeffs[m];
        BatchReal acc = c[expansion.max_order];
        for (int i = expansion.max_order - 1; i >= 0; --i) {
            for (std::size_t p = 0; p < acc.size(); ++p) {
                acc[p] = acc[p] * t1 + c[i][p];
            }
        }
        out.push_back(std::move(acc));
    }
    return out;
}

namespace detail {

inline BatchReal concat(const std::vector<BatchReal>& parts)
{
    std::vector<double> out;
    for (const auto& part : parts) {
        out.insert(out.end(), part.begin(), part.end());
    }
    return BatchReal(std::move(out));
}

} // namespace detail

// Same result as compute_expansion, with the points split into contiguous
// chunks evaluated on separate threads.
inline TaylorExpansion compute_expansion_parallel(const PdeProblem& problem, const BatchReal& points, int max_order,
                                                  unsigned threads)
{
    detail::check_expansion_request(problem, points, max_order);
    const std::size_t chunks = std::clamp<std::size_t>(threads, 1, points.size());
    if (chunks == 1) {
        return compute_expansion(problem, points, max_order);
    }

    std::vector<std::future<TaylorExpansion>> parts;
    const std::size_t base = points.size() / chunks;
    const std::size_t extra = points.size() % chunks;
    std::size_t begin = 0;
    for (std::size_t c = 0; c < chunks; ++c) {
        const std::size_t len = base + (c < extra ? 1 : 0);
        BatchReal chunk(std::vector<double>(points.begin() + begin, points.begin() + begin + len));
        parts.push_back(std::async(std::launch::async, [&problem, chunk = std::move(chunk), max_order] {
            return compute_expansion(problem, chunk, max_order);
        }));
        begin += len;
    }
    std::vector<TaylorExpansion> results;
    for (auto& f : parts) {
        results.push_back(f.get());
    }

    TaylorExpansion out;
    out.points = points;
    out.components = results.front().components;
    out.max_order = max_order;
    out.jet_order = results.front().jet_order;
    out.spatial_order = results.front().spatial_order;
    out.coeffs.resize(out.components);
    out.jet_tails.resize(out.components);
    for (std::size_t m = 0; m < out.components; ++m) {
        for (int i = 0; i <= max_order; ++i) {
            std::vector<BatchReal> values;
            for (const auto& r : results) {
                values.push_back(r.coeffs[m][i]);
            }
            out.coeffs[m].push_back(detail::concat(values));

            std::vector<BatchReal> jet_coeffs;
            for (std::size_t k = 0; k <= out.jet_order; ++k) {
                std::vector<BatchReal> pieces;
                for (const auto& r : results) {
                    pieces.push_back(r.jet_tails[m][i][k]);
                }
                jet_coeffs.push_back(detail::concat(pieces));
            }
            out.jet_tails[m].emplace_back(std::move(jet_coeffs));
        }
    }
    return out;
}

} // namespace infdiff
