#pragma once

#include <vector>

namespace elswap {

/// Fixed-order Gauss-Legendre rule on [-1, 1].
///
/// Nodes are the roots of the Legendre polynomial P_n, found by Newton
/// iteration from the Chebyshev initial guess; weights follow from the
/// derivative. Exact for polynomials of degree <= 2n-1.
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;

    explicit GaussLegendre(int order);
};

/// Integral of g over [a, b] with an n-point Gauss-Legendre rule.
template <class G>
double gauss_legendre_integrate(G&& g, double a, double b, int order) {
    const GaussLegendre rule(order);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        acc += rule.weights[i] * g(mid + half * rule.nodes[i]);
    return half * acc;
}

}  // namespace elswap
