#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "batch.hpp"
#include "errors.hpp"
#include "series.hpp"

namespace infdiff {

// Truncated Taylor expansion of f(X + dx) in the spatial offset dx, for a
// batch of points X. Coefficient k holds f^(k)(X) / k! at every point.
using SpatialJet = TruncatedSeries<BatchReal>;

// Jet of the identity function at X: [X, 1, 0, ..., 0].
inline SpatialJet seed_variable(const BatchReal& x, std::size_t jet_order)
{
    return SpatialJet::variable(x, jet_order);
}

inline SpatialJet constant_jet(const BatchReal& value, std::size_t jet_order)
{
    return SpatialJet::constant(value, jet_order);
}

// Jet of the m-th derivative f^(m), of order p - m. One differentiation maps
// a_k to (k + 1) a_{k+1}.
inline SpatialJet derivative_extract(const SpatialJet& jet, std::size_t m)
{
    const std::size_t p = jet.order();
    if (m > p) {
        throw insufficient_jet_order("derivative of order " + std::to_string(m) + " requested from a jet of order "
                                     + std::to_string(p));
    }
    if (m == 0) {
        return jet;
    }
    std::vector<BatchReal> current = jet.coeffs();
    for (std::size_t step = 0; step < m; ++step) {
        std::vector<BatchReal> next;
        next.reserve(current.size() - 1);
        for (std::size_t k = 0; k + 1 < current.size(); ++k) {
            next.push_back(current[k + 1] * static_cast<double>(k + 1));
        }
        current = std::move(next);
    }
    return SpatialJet(std::move(current));
}

// Derivative f^(m)(X) = m! * a_m read straight from the jet.
inline BatchReal jet_derivative_values(const SpatialJet& jet, std::size_t m)
{
    if (m > jet.order()) {
        throw insufficient_jet_order("derivative of order " + std::to_string(m) + " requested from a jet of order "
                                     + std::to_string(jet.order()));
    }
    double factorial = 1.0;
    for (std::size_t i = 2; i <= m; ++i) {
        factorial *= static_cast<double>(i);
    }
    return jet[m] * factorial;
}

} // namespace infdiff
