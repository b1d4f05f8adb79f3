#pragma once

#include <cmath>
#include <concepts>

#include "errors.hpp"

namespace infdiff {

// Customization point describing a coefficient algebra. Every type used as a
// series coefficient specializes this template. Besides the arithmetic
// operators, a specialization provides:
//
//   zero_like(ref), constant_like(ref, v)   elements shaped like ref
//   is_zero(a), invertible(a), all_finite(a)
//   exp, sin, cos, log, pow(a, p), sech, reciprocal
//
// The analytic primitives throw infdiff::domain_error outside their domain.
template <class C>
struct algebra_traits;

template <class C>
concept CoefficientAlgebra = requires(const C& a, const C& b, double s) {
    { a + b } -> std::convertible_to<C>;
    { a - b } -> std::convertible_to<C>;
    { a * b } -> std::convertible_to<C>;
    { a / b } -> std::convertible_to<C>;
    { -a } -> std::convertible_to<C>;
    { a * s } -> std::convertible_to<C>;
    { a / s } -> std::convertible_to<C>;
    { algebra_traits<C>::zero_like(a) } -> std::convertible_to<C>;
    { algebra_traits<C>::constant_like(a, s) } -> std::convertible_to<C>;
    { algebra_traits<C>::is_zero(a) } -> std::convertible_to<bool>;
    { algebra_traits<C>::invertible(a) } -> std::convertible_to<bool>;
    { algebra_traits<C>::all_finite(a) } -> std::convertible_to<bool>;
    { algebra_traits<C>::exp(a) } -> std::convertible_to<C>;
    { algebra_traits<C>::sin(a) } -> std::convertible_to<C>;
    { algebra_traits<C>::cos(a) } -> std::convertible_to<C>;
    { algebra_traits<C>::log(a) } -> std::convertible_to<C>;
    { algebra_traits<C>::pow(a, s) } -> std::convertible_to<C>;
    { algebra_traits<C>::sech(a) } -> std::convertible_to<C>;
    { algebra_traits<C>::reciprocal(a) } -> std::convertible_to<C>;
};

namespace detail {

inline bool is_integral_value(double p) { return std::isfinite(p) && std::floor(p) == p; }

inline double checked_log(double v)
{
    if (!(v > 0.0)) {
        throw domain_error("log of a non-positive value");
    }
    return std::log(v);
}

inline double checked_pow(double v, double p)
{
    if (v < 0.0 && !is_integral_value(p)) {
        throw domain_error("non-integer power of a negative value");
    }
    if (v == 0.0 && p < 0.0) {
        throw domain_error("negative power of zero");
    }
    return std::pow(v, p);
}

inline double checked_reciprocal(double v)
{
    if (v == 0.0) {
        throw domain_error("reciprocal of zero");
    }
    return 1.0 / v;
}

} // namespace detail

template <>
struct algebra_traits<double> {
    static double zero_like(double) { return 0.0; }
    static double constant_like(double, double v) { return v; }
    static bool is_zero(double a) { return a == 0.0; }
    static bool invertible(double a) { return a != 0.0 && std::isfinite(a); }
    static bool all_finite(double a) { return std::isfinite(a); }

    static double exp(double a) { return std::exp(a); }
    static double sin(double a) { return std::sin(a); }
    static double cos(double a) { return std::cos(a); }
    static double log(double a) { return detail::checked_log(a); }
    static double pow(double a, double p) { return detail::checked_pow(a, p); }
    static double sech(double a) { return 1.0 / std::cosh(a); }
    static double reciprocal(double a) { return detail::checked_reciprocal(a); }
};

static_assert(CoefficientAlgebra<double>);

} // namespace infdiff
