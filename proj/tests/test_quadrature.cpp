#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "elswap/quadrature.hpp"

using namespace elswap;

TEST_CASE("gauss-legendre order 2 matches the textbook rule") {
    GaussLegendre rule(2);
    CHECK(rule.nodes[0] == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-14));
    CHECK(rule.nodes[1] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));
    CHECK(rule.weights[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(rule.weights[1] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("polynomials up to degree 2n-1 are integrated exactly") {
    for (int order : {2, 3, 5, 8, 17, 64}) {
        GaussLegendre rule(order);
        const int degree = 2 * order - 1;
        // int_{-1}^{1} x^d dx = 0 (odd) or 2/(d+1) (even)
        for (int d = 0; d <= degree; ++d) {
            double acc = 0.0;
            for (std::size_t i = 0; i < rule.nodes.size(); ++i)
                acc += rule.weights[i] * std::pow(rule.nodes[i], d);
            const double exact = d % 2 == 1 ? 0.0 : 2.0 / (d + 1);
            CHECK(acc == doctest::Approx(exact).epsilon(1e-12).scale(1.0));
        }
    }
}

TEST_CASE("smooth integrand on a shifted interval") {
    const double got = gauss_legendre_integrate([](double x) { return std::cos(x); }, 0.2, 1.7, 32);
    CHECK(got == doctest::Approx(std::sin(1.7) - std::sin(0.2)).epsilon(1e-14));
}

TEST_CASE("order below 2 is rejected") {
    CHECK_THROWS_AS(GaussLegendre(1), std::invalid_argument);
}
