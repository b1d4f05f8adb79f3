#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "infdiff/infdiff.hpp"

namespace support {

using infdiff::TruncatedSeries;

inline std::vector<double> random_values(std::mt19937_64& rng, std::size_t n, double lo = -1.0, double hi = 1.0)
{
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<double> v(n);
    for (auto& x : v) {
        x = dist(rng);
    }
    return v;
}

inline TruncatedSeries<double> random_series(std::mt19937_64& rng, std::size_t order, double lo = -1.0,
                                             double hi = 1.0)
{
    return TruncatedSeries<double>(random_values(rng, order + 1, lo, hi));
}

inline double max_abs(const std::vector<double>& v)
{
    double m = 0.0;
    for (double x : v) {
        m = std::max(m, std::abs(x));
    }
    return m;
}

// max_i |a_i - b_i| / max(1, max|a|, max|b|)
inline double scaled_diff(const std::vector<double>& a, const std::vector<double>& b)
{
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        d = std::max(d, std::abs(a[i] - b[i]));
    }
    return d / std::max({1.0, max_abs(a), max_abs(b)});
}

inline double scaled_diff(const TruncatedSeries<double>& a, const TruncatedSeries<double>& b)
{
    return scaled_diff(a.coeffs(), b.coeffs());
}

inline double max_abs_diff(const infdiff::BatchReal& a, const infdiff::BatchReal& b)
{
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        d = std::max(d, std::abs(a[i] - b[i]));
    }
    return d;
}

} // namespace support
