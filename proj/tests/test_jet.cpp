#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "properties.hpp"

using namespace infdiff;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
constexpr double pi = std::numbers::pi;

TEST_CASE("seed variable is the identity jet", "[jet]")
{
    const SpatialJet x = seed_variable(BatchReal{0.25, 0.5}, 4);
    CHECK(x.order() == 4);
    CHECK(x[0] == BatchReal{0.25, 0.5});
    CHECK(x[1] == BatchReal{1.0, 1.0});
    CHECK(x[2] == BatchReal{0.0, 0.0});
    CHECK(jet_derivative_values(x, 1) == BatchReal{1.0, 1.0});
}

TEST_CASE("jets of sin carry scaled derivatives", "[jet]")
{
    const BatchReal x{-0.7, 0.1, 0.5, 0.93};
    const SpatialJet s = sin(seed_variable(x, 8) * pi);
    for (std::size_t k = 0; k <= 8; ++k) {
        const BatchReal d = jet_derivative_values(s, k);
        for (std::size_t p = 0; p < x.size(); ++p) {
            // d^k/dx^k sin(pi x) = pi^k sin(pi x + k pi / 2)
            const double expected = std::pow(pi, k) * std::sin(pi * x[p] + k * pi / 2.0);
            INFO("k = " << k << " x = " << x[p]);
            CHECK_THAT(d[p], WithinAbs(expected, 1e-13 * std::max(1.0, std::pow(pi, k))));
        }
    }
}

TEST_CASE("jets of exp(x^2) match closed-form derivatives", "[jet]")
{
    const BatchReal x{-0.4, 0.3, 0.8};
    const SpatialJet xj = seed_variable(x, 4);
    const SpatialJet f = exp(xj * xj);
    for (std::size_t p = 0; p < x.size(); ++p) {
        const double v = x[p];
        const double e = std::exp(v * v);
        CHECK_THAT(jet_derivative_values(f, 1)[p], WithinRel(2 * v * e, 1e-13));
        CHECK_THAT(jet_derivative_values(f, 2)[p], WithinRel((2 + 4 * v * v) * e, 1e-13));
        CHECK_THAT(jet_derivative_values(f, 3)[p], WithinRel((12 * v + 8 * v * v * v) * e, 1e-13));
        CHECK_THAT(jet_derivative_values(f, 4)[p], WithinRel((12 + 48 * v * v + 16 * v * v * v * v) * e, 1e-13));
    }
}

TEST_CASE("sech jet matches the closed form", "[jet]")
{
    const BatchReal x{-1.5, 0.2, 2.0};
    const SpatialJet f = sech(seed_variable(x, 3));
    for (std::size_t p = 0; p < x.size(); ++p) {
        const double s = 1.0 / std::cosh(x[p]);
        const double t = std::tanh(x[p]);
        CHECK_THAT(jet_derivative_values(f, 0)[p], WithinRel(s, 1e-14));
        CHECK_THAT(jet_derivative_values(f, 1)[p], WithinAbs(-s * t, 1e-14));
        CHECK_THAT(jet_derivative_values(f, 2)[p], WithinAbs(s * (t * t - s * s), 1e-13));
    }
}

TEST_CASE("jet derivatives agree with long double finite differences", "[jet][property]")
{
    CHECK(properties::jet_fd_error() <= 1e-7);
}

TEST_CASE("jets obey the product and chain rules", "[jet][property]")
{
    const BatchReal x{0.2, 0.45, 0.9};
    const SpatialJet xj = seed_variable(x, 5);
    const SpatialJet f = sin(xj);
    const SpatialJet g = exp(xj * 0.5);
    const BatchReal lhs = jet_derivative_values(f * g, 1);
    const BatchReal rhs = jet_derivative_values(f, 1) * g[0] + f[0] * jet_derivative_values(g, 1);
    CHECK(support::max_abs_diff(lhs, rhs) <= 1e-15);

    const SpatialJet inner = xj * xj + 1.0;
    const BatchReal chain = jet_derivative_values(cos(inner), 1);
    const BatchReal expected = -algebra_traits<BatchReal>::sin(inner[0]) * jet_derivative_values(inner, 1);
    CHECK(support::max_abs_diff(chain, expected) <= 1e-15);

    const BatchReal second = jet_derivative_values(f * g, 2);
    const BatchReal leibniz = jet_derivative_values(f, 2) * g[0] + jet_derivative_values(f, 1) *
                              jet_derivative_values(g, 1) * 2.0 + f[0] * jet_derivative_values(g, 2);
    CHECK(support::max_abs_diff(second, leibniz) <= 1e-14);
}

TEST_CASE("derivative_extract shifts and scales coefficients", "[jet]")
{
    const SpatialJet j{BatchReal{1.0}, BatchReal{2.0}, BatchReal{3.0}, BatchReal{4.0}};
    const SpatialJet d1 = derivative_extract(j, 1);
    REQUIRE(d1.order() == 2);
    CHECK(d1[0] == BatchReal{2.0});
    CHECK(d1[1] == BatchReal{6.0});
    CHECK(d1[2] == BatchReal{12.0});
    const SpatialJet d2 = derivative_extract(j, 2);
    REQUIRE(d2.order() == 1);
    CHECK(d2[0] == BatchReal{6.0});
    CHECK(d2[1] == BatchReal{24.0});
    CHECK(derivative_extract(j, 0) == j);
    CHECK(derivative_extract(j, 3).order() == 0);
    CHECK_THROWS_AS(derivative_extract(j, 4), insufficient_jet_order);
    CHECK_THROWS_AS(jet_derivative_values(j, 4), insufficient_jet_order);
}

TEST_CASE("batch arithmetic is elementwise and size checked", "[jet]")
{
    const BatchReal a{1.0, 2.0};
    const BatchReal b{3.0, 5.0};
    CHECK(a + b == BatchReal{4.0, 7.0});
    CHECK(a * b == BatchReal{3.0, 10.0});
    CHECK(b / a == BatchReal{3.0, 2.5});
    CHECK(a * 2.0 == BatchReal{2.0, 4.0});
    CHECK_THROWS_AS(a + BatchReal{1.0}, contract_violation);
    CHECK_THROWS_AS(algebra_traits<BatchReal>::log(BatchReal{1.0, -1.0}), infdiff::domain_error);
}
