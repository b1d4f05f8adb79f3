#pragma once

#include <cmath>
#include <concepts>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "algebra.hpp"
#include "errors.hpp"

namespace infdiff {

template <CoefficientAlgebra C>
class TruncatedSeries;

namespace detail {

template <class C>
void add_product(C& acc, const C& a, const C& b);

} // namespace detail

// A truncated power series C0 + C1*eps + ... + Cn*eps^n in an infinitesimal
// eps, stored as its coefficient vector. Coefficients belong to any
// CoefficientAlgebra (a real, a batch of reals, or another series). Every
// operation truncates its result at the common order n; values are immutable.
template <CoefficientAlgebra C>
class TruncatedSeries {
public:
    using coefficient_type = C;
    using traits = algebra_traits<C>;

    explicit TruncatedSeries(std::vector<C> coeffs) : coeffs_(std::move(coeffs))
    {
        if (coeffs_.empty()) {
            throw contract_violation("a truncated series needs at least one coefficient");
        }
    }

    TruncatedSeries(std::initializer_list<C> coeffs) : TruncatedSeries(std::vector<C>(coeffs)) {}

    // [c, 0, ..., 0]
    static TruncatedSeries constant(const C& c, std::size_t order)
    {
        std::vector<C> coeffs(order + 1, traits::zero_like(c));
        coeffs[0] = c;
        return TruncatedSeries(std::move(coeffs));
    }

    static TruncatedSeries zero(const C& like, std::size_t order)
    {
        return TruncatedSeries(std::vector<C>(order + 1, traits::zero_like(like)));
    }

    // c + 1*eps, the series of the independent variable around c.
    static TruncatedSeries variable(const C& c, std::size_t order)
    {
        std::vector<C> coeffs(order + 1, traits::zero_like(c));
        coeffs[0] = c;
        if (order >= 1) {
            coeffs[1] = traits::constant_like(c, 1.0);
        }
        return TruncatedSeries(std::move(coeffs));
    }

    std::size_t order() const noexcept { return coeffs_.size() - 1; }
    const C& operator[](std::size_t i) const { return coeffs_[i]; }
    const C& coeff(std::size_t i) const { return coeffs_.at(i); }
    const std::vector<C>& coeffs() const noexcept { return coeffs_; }

    // Drops coefficients above new_order, or pads with zeros up to it.
    TruncatedSeries truncated(std::size_t new_order) const
    {
        std::vector<C> out;
        out.reserve(new_order + 1);
        for (std::size_t i = 0; i <= new_order; ++i) {
            out.push_back(i < coeffs_.size() ? coeffs_[i] : traits::zero_like(coeffs_[0]));
        }
        return TruncatedSeries(std::move(out));
    }

    // Copy with coefficient i replaced.
    TruncatedSeries with_coeff(std::size_t i, C value) const
    {
        if (i > order()) {
            throw contract_violation("coefficient index " + std::to_string(i) + " exceeds order "
                                     + std::to_string(order()));
        }
        auto out = coeffs_;
        out[i] = std::move(value);
        return TruncatedSeries(std::move(out));
    }

    template <class F>
    auto map(F&& f) const
    {
        using R = std::decay_t<decltype(f(coeffs_[0]))>;
        std::vector<R> out;
        out.reserve(coeffs_.size());
        for (const auto& c : coeffs_) {
            out.push_back(f(c));
        }
        return TruncatedSeries<R>(std::move(out));
    }

    friend bool operator==(const TruncatedSeries& a, const TruncatedSeries& b) { return a.coeffs_ == b.coeffs_; }

    TruncatedSeries& add_product(const TruncatedSeries& a, const TruncatedSeries& b)
    {
        check_same_order(*this, a);
        check_same_order(a, b);
        const std::size_t n = order();
        for (std::size_t k = 0; k <= n; ++k) {
            for (std::size_t i = 0; i <= k; ++i) {
                detail::add_product(coeffs_[k], a.coeffs_[i], b.coeffs_[k - i]);
            }
        }
        return *this;
    }

    static void check_same_order(const TruncatedSeries& a, const TruncatedSeries& b)
    {
        if (a.order() != b.order()) {
            throw contract_violation("series order mismatch: " + std::to_string(a.order()) + " vs "
                                     + std::to_string(b.order()));
        }
    }

private:
    std::vector<C> coeffs_;
};

namespace detail {

template <class C>
void add_product(C& acc, const C& a, const C& b)
{
    if constexpr (std::same_as<C, double>) {
        acc += a * b;
    } else if constexpr (requires { acc.add_product(a, b); }) {
        acc.add_product(a, b);
    } else {
        acc = acc + a * b;
    }
}

template <class C, class F>
TruncatedSeries<C> zip_coeffs(const TruncatedSeries<C>& a, const TruncatedSeries<C>& b, F&& f)
{
    TruncatedSeries<C>::check_same_order(a, b);
    std::vector<C> out;
    out.reserve(a.order() + 1);
    for (std::size_t i = 0; i <= a.order(); ++i) {
        out.push_back(f(a[i], b[i]));
    }
    return TruncatedSeries<C>(std::move(out));
}

} // namespace detail

template <class C>
TruncatedSeries<C> operator+(const TruncatedSeries<C>& a, const TruncatedSeries<C>& b)
{
    return detail::zip_coeffs(a, b, [](const C& x, const C& y) { return C(x + y); });
}

template <class C>
TruncatedSeries<C> operator-(const TruncatedSeries<C>& a, const TruncatedSeries<C>& b)
{
    return detail::zip_coeffs(a, b, [](const C& x, const C& y) { return C(x - y); });
}

template <class C>
TruncatedSeries<C> operator-(const TruncatedSeries<C>& a)
{
    return a.map([](const C& x) { return C(-x); });
}

// Cauchy product truncated at the common order.
template <class C>
TruncatedSeries<C> operator*(const TruncatedSeries<C>& a, const TruncatedSeries<C>& b)
{
    auto out = TruncatedSeries<C>::zero(a[0], a.order());
    out.add_product(a, b);
    return out;
}

// Quotient by the recurrence q_k = (a_k - sum_{j=1..k} b_j q_{k-j}) / b_0.
template <class C>
TruncatedSeries<C> operator/(const TruncatedSeries<C>& a, const TruncatedSeries<C>& b)
{
    TruncatedSeries<C>::check_same_order(a, b);
    using traits = algebra_traits<C>;
    if (!traits::invertible(b[0])) {
        throw infinitesimal_divisor("division by a series with a non-invertible leading coefficient");
    }
    const std::size_t n = a.order();
    std::vector<C> q;
    q.reserve(n + 1);
    q.push_back(a[0] / b[0]);
    for (std::size_t k = 1; k <= n; ++k) {
        C acc = traits::zero_like(a[0]);
        for (std::size_t j = 1; j <= k; ++j) {
            detail::add_product(acc, b[j], q[k - j]);
        }
        q.push_back((a[k] - acc) / b[0]);
    }
    return TruncatedSeries<C>(std::move(q));
}

template <class C>
TruncatedSeries<C> operator*(const TruncatedSeries<C>& a, double s)
{
    return a.map([s](const C& x) { return C(x * s); });
}

template <class C>
TruncatedSeries<C> operator*(double s, const TruncatedSeries<C>& a)
{
    return a * s;
}

template <class C>
TruncatedSeries<C> operator/(const TruncatedSeries<C>& a, double s)
{
    return a.map([s](const C& x) { return C(x / s); });
}

template <class C>
TruncatedSeries<C> operator+(const TruncatedSeries<C>& a, double s)
{
    return a.with_coeff(0, a[0] + algebra_traits<C>::constant_like(a[0], s));
}

template <class C>
TruncatedSeries<C> operator+(double s, const TruncatedSeries<C>& a)
{
    return a + s;
}

template <class C>
TruncatedSeries<C> operator-(const TruncatedSeries<C>& a, double s)
{
    return a + (-s);
}

template <class C>
TruncatedSeries<C> operator-(double s, const TruncatedSeries<C>& a)
{
    return (-a) + s;
}

// Mixed operations with a bare coefficient, treated as the constant series [c, 0, ..., 0].
template <class C>
    requires(!std::same_as<C, double>)
TruncatedSeries<C> operator*(const TruncatedSeries<C>& a, const C& c)
{
    return a.map([&c](const C& x) { return C(x * c); });
}

template <class C>
    requires(!std::same_as<C, double>)
TruncatedSeries<C> operator*(const C& c, const TruncatedSeries<C>& a)
{
    return a.map([&c](const C& x) { return C(c * x); });
}

template <class C>
    requires(!std::same_as<C, double>)
TruncatedSeries<C> operator+(const TruncatedSeries<C>& a, const C& c)
{
    return a.with_coeff(0, a[0] + c);
}

template <class C>
    requires(!std::same_as<C, double>)
TruncatedSeries<C> operator-(const TruncatedSeries<C>& a, const C& c)
{
    return a.with_coeff(0, a[0] - c);
}

// The series sum_k s_k * c * eps^k: a scalar series spread over a coefficient.
template <class C>
TruncatedSeries<C> broadcast(const TruncatedSeries<double>& s, const C& c)
{
    std::vector<C> out;
    out.reserve(s.order() + 1);
    for (std::size_t k = 0; k <= s.order(); ++k) {
        out.push_back(C(c * s[k]));
    }
    return TruncatedSeries<C>(std::move(out));
}

// Multiplication by eps^k: coefficients move right, the last k are truncated.
// When k exceeds the order the result is the zero series and *fully_truncated
// (if given) is set.
template <class C>
TruncatedSeries<C> shift_up(const TruncatedSeries<C>& a, std::size_t k, bool* fully_truncated = nullptr)
{
    const std::size_t n = a.order();
    if (fully_truncated != nullptr) {
        *fully_truncated = k > n;
    }
    std::vector<C> out(n + 1, algebra_traits<C>::zero_like(a[0]));
    for (std::size_t i = k; i <= n; ++i) {
        out[i] = a[i - k];
    }
    return TruncatedSeries<C>(std::move(out));
}

// Division by eps^k. The first k coefficients must be zero; otherwise the
// result would carry a negative power of eps, which is not representable.
template <class C>
TruncatedSeries<C> shift_down(const TruncatedSeries<C>& a, std::size_t k)
{
    const std::size_t n = a.order();
    for (std::size_t i = 0; i < k && i <= n; ++i) {
        if (!algebra_traits<C>::is_zero(a[i])) {
            throw infinite_part("shift_down by " + std::to_string(k) + " discards nonzero coefficient "
                                + std::to_string(i));
        }
    }
    std::vector<C> out(n + 1, algebra_traits<C>::zero_like(a[0]));
    for (std::size_t i = 0; i + k <= n; ++i) {
        out[i] = a[i + k];
    }
    return TruncatedSeries<C>(std::move(out));
}

// Horner evaluation of sum_k a_k s^k for a finite s.
template <class C>
C substitute(const TruncatedSeries<C>& a, double s)
{
    C acc = a[a.order()];
    for (std::size_t k = a.order(); k-- > 0;) {
        acc = C(acc * s + a[k]);
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Analytic lifts. The constant term is the function applied in the coefficient
// algebra; higher terms follow the usual derivative recurrences.

namespace detail {

// j * a_j for j = 0..n
template <class C>
std::vector<C> weighted_coeffs(const TruncatedSeries<C>& a)
{
    std::vector<C> out;
    out.reserve(a.order() + 1);
    for (std::size_t j = 0; j <= a.order(); ++j) {
        out.push_back(C(a[j] * static_cast<double>(j)));
    }
    return out;
}

} // namespace detail

template <class C>
TruncatedSeries<C> exp(const TruncatedSeries<C>& a)
{
    using traits = algebra_traits<C>;
    const std::size_t n = a.order();
    const auto da = detail::weighted_coeffs(a);
    std::vector<C> e;
    e.reserve(n + 1);
    e.push_back(traits::exp(a[0]));
    for (std::size_t k = 1; k <= n; ++k) {
        C acc = traits::zero_like(a[0]);
        for (std::size_t j = 1; j <= k; ++j) {
            detail::add_product(acc, da[j], e[k - j]);
        }
        e.push_back(C(acc / static_cast<double>(k)));
    }
    return TruncatedSeries<C>(std::move(e));
}

// sin and cos share one coupled recurrence.
template <class C>
std::pair<TruncatedSeries<C>, TruncatedSeries<C>> sincos(const TruncatedSeries<C>& a)
{
    using traits = algebra_traits<C>;
    const std::size_t n = a.order();
    const auto da = detail::weighted_coeffs(a);
    std::vector<C> s;
    std::vector<C> c;
    s.reserve(n + 1);
    c.reserve(n + 1);
    s.push_back(traits::sin(a[0]));
    c.push_back(traits::cos(a[0]));
    for (std::size_t k = 1; k <= n; ++k) {
        C acc_s = traits::zero_like(a[0]);
        C acc_c = traits::zero_like(a[0]);
        for (std::size_t j = 1; j <= k; ++j) {
            detail::add_product(acc_s, da[j], c[k - j]);
            detail::add_product(acc_c, da[j], s[k - j]);
        }
        s.push_back(C(acc_s / static_cast<double>(k)));
        c.push_back(C(-acc_c / static_cast<double>(k)));
    }
    return {TruncatedSeries<C>(std::move(s)), TruncatedSeries<C>(std::move(c))};
}

template <class C>
TruncatedSeries<C> sin(const TruncatedSeries<C>& a)
{
    return sincos(a).first;
}

template <class C>
TruncatedSeries<C> cos(const TruncatedSeries<C>& a)
{
    return sincos(a).second;
}

template <class C>
TruncatedSeries<C> log(const TruncatedSeries<C>& a)
{
    using traits = algebra_traits<C>;
    const std::size_t n = a.order();
    std::vector<C> l;
    l.reserve(n + 1);
    l.push_back(traits::log(a[0]));
    if (n == 0) {
        return TruncatedSeries<C>(std::move(l));
    }
    if (!traits::invertible(a[0])) {
        throw domain_error("log of a series with a non-invertible constant term");
    }
    std::vector<C> dl;
    dl.reserve(n + 1);
    dl.push_back(traits::zero_like(a[0]));
    for (std::size_t k = 1; k <= n; ++k) {
        C acc = traits::zero_like(a[0]);
        for (std::size_t j = 1; j < k; ++j) {
            detail::add_product(acc, dl[j], a[k - j]);
        }
        l.push_back(C((a[k] - C(acc / static_cast<double>(k))) / a[0]));
        dl.push_back(C(l[k] * static_cast<double>(k)));
    }
    return TruncatedSeries<C>(std::move(l));
}

template <class C>
TruncatedSeries<C> reciprocal(const TruncatedSeries<C>& a)
{
    if (!algebra_traits<C>::invertible(a[0])) {
        throw domain_error("reciprocal of a series with a non-invertible constant term");
    }
    return TruncatedSeries<C>::constant(algebra_traits<C>::constant_like(a[0], 1.0), a.order()) / a;
}

// a^p for a constant real p. Non-negative integer powers use repeated
// multiplication and accept any base; other powers need an invertible base.
template <class C>
TruncatedSeries<C> pow(const TruncatedSeries<C>& a, double p)
{
    using traits = algebra_traits<C>;
    const std::size_t n = a.order();
    if (detail::is_integral_value(p) && p >= 0.0) {
        auto result = TruncatedSeries<C>::constant(traits::constant_like(a[0], 1.0), n);
        auto base = a;
        auto e = static_cast<unsigned long long>(p);
        while (e > 0) {
            if (e & 1ULL) {
                result = result * base;
            }
            e >>= 1;
            if (e > 0) {
                base = base * base;
            }
        }
        return result;
    }
    std::vector<C> out;
    out.reserve(n + 1);
    out.push_back(traits::pow(a[0], p));
    if (n == 0) {
        return TruncatedSeries<C>(std::move(out));
    }
    if (!traits::invertible(a[0])) {
        throw domain_error("non-integer power of a series with a non-invertible constant term");
    }
    for (std::size_t k = 1; k <= n; ++k) {
        C acc = traits::zero_like(a[0]);
        for (std::size_t j = 1; j <= k; ++j) {
            const double w = (p + 1.0) * static_cast<double>(j) - static_cast<double>(k);
            detail::add_product(acc, C(a[j] * w), out[k - j]);
        }
        out.push_back(C(C(acc / static_cast<double>(k)) / a[0]));
    }
    return TruncatedSeries<C>(std::move(out));
}

template <class C>
TruncatedSeries<C> cosh(const TruncatedSeries<C>& a)
{
    return (exp(a) + exp(-a)) * 0.5;
}

template <class C>
TruncatedSeries<C> sech(const TruncatedSeries<C>& a)
{
    return reciprocal(cosh(a));
}

enum class AnalyticFunction { exp, sin, cos, ln, pow_const, sech, reciprocal };

// Dispatches to the lift named by f. `exponent` is only read for pow_const.
template <class C>
TruncatedSeries<C> analytic_lift(AnalyticFunction f, const TruncatedSeries<C>& a, double exponent = 1.0)
{
    switch (f) {
    case AnalyticFunction::exp:
        return exp(a);
    case AnalyticFunction::sin:
        return sin(a);
    case AnalyticFunction::cos:
        return cos(a);
    case AnalyticFunction::ln:
        return log(a);
    case AnalyticFunction::pow_const:
        return pow(a, exponent);
    case AnalyticFunction::sech:
        return sech(a);
    case AnalyticFunction::reciprocal:
        return reciprocal(a);
    }
    throw contract_violation("unknown analytic function");
}

// A series is itself a coefficient algebra, which is what allows nesting.
template <CoefficientAlgebra C>
struct algebra_traits<TruncatedSeries<C>> {
    using S = TruncatedSeries<C>;

    static S zero_like(const S& a) { return S::zero(a[0], a.order()); }
    static S constant_like(const S& a, double v)
    {
        return S::constant(algebra_traits<C>::constant_like(a[0], v), a.order());
    }
    static bool is_zero(const S& a)
    {
        for (const auto& c : a.coeffs()) {
            if (!algebra_traits<C>::is_zero(c)) {
                return false;
            }
        }
        return true;
    }
    // Invertible iff the leading coefficient is; a divisor that is itself
    // infinitesimal at the inner level is rejected.
    static bool invertible(const S& a) { return algebra_traits<C>::invertible(a[0]); }
    static bool all_finite(const S& a)
    {
        for (const auto& c : a.coeffs()) {
            if (!algebra_traits<C>::all_finite(c)) {
                return false;
            }
        }
        return true;
    }

    static S exp(const S& a) { return infdiff::exp(a); }
    static S sin(const S& a) { return infdiff::sin(a); }
    static S cos(const S& a) { return infdiff::cos(a); }
    static S log(const S& a) { return infdiff::log(a); }
    static S pow(const S& a, double p) { return infdiff::pow(a, p); }
    static S sech(const S& a) { return infdiff::sech(a); }
    static S reciprocal(const S& a) { return infdiff::reciprocal(a); }
};

static_assert(CoefficientAlgebra<TruncatedSeries<double>>);

} // namespace infdiff
