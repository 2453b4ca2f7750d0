#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "elswap/quadrature.hpp"

namespace elswap {

/// Delivery period (tau1, tau2] in years.
struct DeliveryPeriod {
    double tau1;
    double tau2;

    DeliveryPeriod(double t1, double t2) : tau1(t1), tau2(t2) {
        if (!(t1 >= 0.0))
            throw std::invalid_argument("delivery period: tau1 must be >= 0");
        if (!(t1 < t2))
            throw std::invalid_argument("delivery period: tau1 < tau2 required");
    }

    double length() const { return tau2 - tau1; }
};

/// Settlement weight over the delivery period. The induced density
/// w(u) = what(u) / integral(what) is the law of the random delivery
/// variable U on (tau1, tau2].
class WeightScheme {
  public:
    enum class Kind { uniform, discounted, tabulated };

    static WeightScheme uniform();
    /// Continuous settlement discounted at constant rate r > 0: what(u) = e^{-r u}.
    static WeightScheme discounted(double rate);
    /// Piecewise-linear settlement through (u_i, what_i) knots, what_i > 0.
    static WeightScheme tabulated(std::vector<double> knots_u, std::vector<double> knots_w);

    Kind kind() const { return kind_; }
    double rate() const { return rate_; }

    /// Settlement function what(u) (unnormalized).
    double settlement(double u) const;
    /// Exact integral of what over [period.tau1, period.tau2].
    double settlement_integral(const DeliveryPeriod& period) const;

  private:
    WeightScheme(Kind k, double r, std::vector<double> u, std::vector<double> w)
        : kind_(k), rate_(r), knots_u_(std::move(u)), knots_w_(std::move(w)) {}

    Kind kind_;
    double rate_ = 0.0;
    std::vector<double> knots_u_;
    std::vector<double> knots_w_;
};

/// Fixed-order Gauss-Legendre rule used for every E[.]-over-U integral.
struct QuadratureRule {
    int order = 64;

    QuadratureRule() = default;
    explicit QuadratureRule(int n) : order(n) {
        if (n < 2)
            throw std::invalid_argument("quadrature order must be >= 2");
    }
};

/// Normalized density w(u, tau1, tau2) of the delivery variable U at u.
/// Point evaluation accepts the closed interval [tau1, tau2].
double density(const WeightScheme& scheme, double u, const DeliveryPeriod& period);

/// Shared discretization of E[g(U)]: Gauss-Legendre nodes u_j on the period
/// with combined weights w_j = gl_w_j * w(u_j) normalized to sum to one, so
/// pathwise delivery averages and analytic expectations use identical nodes.
class DeliveryAverager {
  public:
    DeliveryAverager(const WeightScheme& scheme, const DeliveryPeriod& period,
                     const QuadratureRule& quad);

    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& weights() const { return weights_; }
    const DeliveryPeriod& period() const { return period_; }

    template <class G>
    double expect(G&& g) const {
        double acc = 0.0;
        for (std::size_t j = 0; j < nodes_.size(); ++j) {
            const double v = g(nodes_[j]);
            if (!std::isfinite(v))
                throw std::runtime_error(
                    "non-finite integrand at delivery node u=" + std::to_string(nodes_[j]));
            acc += weights_[j] * v;
        }
        return acc;
    }

    template <class G>
    double variance(G&& g) const {
        const double m = expect(g);
        const double m2 = expect([&](double u) {
            const double v = g(u);
            return v * v;
        });
        double var = m2 - m * m;
        if (std::abs(var) < 1e-14)
            var = 0.0;
        return var;
    }

  private:
    DeliveryPeriod period_;
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

/// E[g(U)] by quadrature against the settlement density.
double expect(const std::function<double(double)>& g, const WeightScheme& scheme,
              const DeliveryPeriod& period, const QuadratureRule& quad);

/// V[g(U)] = E[g^2] - E[g]^2, clamped to zero when |value| < 1e-14.
double variance(const std::function<double(double)>& g, const WeightScheme& scheme,
                const DeliveryPeriod& period, const QuadratureRule& quad);

}  // namespace elswap
