#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "algebra.hpp"
#include "errors.hpp"

namespace infdiff {

// A batch of reals, one per spatial sample point. All arithmetic is
// elementwise and requires equal lengths.
class BatchReal {
public:
    BatchReal() = default;
    explicit BatchReal(std::vector<double> values) : values_(std::move(values)) {}
    BatchReal(std::initializer_list<double> values) : values_(values) {}
    BatchReal(std::size_t size, double value) : values_(size, value) {}

    std::size_t size() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.empty(); }

    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }

    std::span<const double> values() const noexcept { return values_; }
    std::span<double> values() noexcept { return values_; }
    const std::vector<double>& vector() const noexcept { return values_; }

    auto begin() const noexcept { return values_.begin(); }
    auto end() const noexcept { return values_.end(); }

    friend bool operator==(const BatchReal&, const BatchReal&) = default;

    template <class F>
    BatchReal map(F&& f) const
    {
        BatchReal out(size(), 0.0);
        for (std::size_t i = 0; i < size(); ++i) {
            out.values_[i] = f(values_[i]);
        }
        return out;
    }

    template <class F>
    friend BatchReal zip(const BatchReal& a, const BatchReal& b, F&& f)
    {
        check_same_size(a, b);
        BatchReal out(a.size(), 0.0);
        for (std::size_t i = 0; i < a.size(); ++i) {
            out.values_[i] = f(a.values_[i], b.values_[i]);
        }
        return out;
    }

    BatchReal& operator+=(const BatchReal& o)
    {
        check_same_size(*this, o);
        for (std::size_t i = 0; i < size(); ++i) {
            values_[i] += o.values_[i];
        }
        return *this;
    }

    BatchReal& operator-=(const BatchReal& o)
    {
        check_same_size(*this, o);
        for (std::size_t i = 0; i < size(); ++i) {
            values_[i] -= o.values_[i];
        }
        return *this;
    }

    // this += a * b, without a temporary.
    BatchReal& add_product(const BatchReal& a, const BatchReal& b)
    {
        check_same_size(*this, a);
        check_same_size(a, b);
        for (std::size_t i = 0; i < size(); ++i) {
            values_[i] += a.values_[i] * b.values_[i];
        }
        return *this;
    }

    static void check_same_size(const BatchReal& a, const BatchReal& b)
    {
        if (a.size() != b.size()) {
            throw contract_violation("batch size mismatch: " + std::to_string(a.size()) + " vs "
                                     + std::to_string(b.size()));
        }
    }

private:
    std::vector<double> values_;
};

inline BatchReal operator+(const BatchReal& a, const BatchReal& b)
{
    return zip(a, b, [](double x, double y) { return x + y; });
}
inline BatchReal operator-(const BatchReal& a, const BatchReal& b)
{
    return zip(a, b, [](double x, double y) { return x - y; });
}
inline BatchReal operator*(const BatchReal& a, const BatchReal& b)
{
    return zip(a, b, [](double x, double y) { return x * y; });
}
inline BatchReal operator/(const BatchReal& a, const BatchReal& b)
{
    return zip(a, b, [](double x, double y) { return x / y; });
}
inline BatchReal operator-(const BatchReal& a)
{
    return a.map([](double x) { return -x; });
}
inline BatchReal operator*(const BatchReal& a, double s)
{
    return a.map([s](double x) { return x * s; });
}
inline BatchReal operator*(double s, const BatchReal& a)
{
    return a.map([s](double x) { return s * x; });
}
inline BatchReal operator/(const BatchReal& a, double s)
{
    return a.map([s](double x) { return x / s; });
}
inline BatchReal operator+(const BatchReal& a, double s)
{
    return a.map([s](double x) { return x + s; });
}
inline BatchReal operator-(const BatchReal& a, double s)
{
    return a.map([s](double x) { return x - s; });
}

template <>
struct algebra_traits<BatchReal> {
    static BatchReal zero_like(const BatchReal& a) { return BatchReal(a.size(), 0.0); }
    static BatchReal constant_like(const BatchReal& a, double v) { return BatchReal(a.size(), v); }

    static bool is_zero(const BatchReal& a)
    {
        return std::all_of(a.begin(), a.end(), [](double x) { return x == 0.0; });
    }
    static bool invertible(const BatchReal& a)
    {
        return std::all_of(a.begin(), a.end(), [](double x) { return algebra_traits<double>::invertible(x); });
    }
    static bool all_finite(const BatchReal& a)
    {
        return std::all_of(a.begin(), a.end(), [](double x) { return std::isfinite(x); });
    }

    static BatchReal exp(const BatchReal& a) { return a.map([](double x) { return std::exp(x); }); }
    static BatchReal sin(const BatchReal& a) { return a.map([](double x) { return std::sin(x); }); }
    static BatchReal cos(const BatchReal& a) { return a.map([](double x) { return std::cos(x); }); }
    static BatchReal log(const BatchReal& a) { return a.map(detail::checked_log); }
    static BatchReal pow(const BatchReal& a, double p)
    {
        return a.map([p](double x) { return detail::checked_pow(x, p); });
    }
    static BatchReal sech(const BatchReal& a) { return a.map([](double x) { return 1.0 / std::cosh(x); }); }
    static BatchReal reciprocal(const BatchReal& a) { return a.map(detail::checked_reciprocal); }
};

static_assert(CoefficientAlgebra<BatchReal>);

} // namespace infdiff
