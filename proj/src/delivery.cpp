#include "elswap/delivery.hpp"

#include <algorithm>

namespace elswap {

WeightScheme WeightScheme::uniform() { return WeightScheme(Kind::uniform, 0.0, {}, {}); }

WeightScheme WeightScheme::discounted(double rate) {
    if (!(rate > 0.0))
        throw std::invalid_argument("discounted weight scheme: rate must be > 0");
    return WeightScheme(Kind::discounted, rate, {}, {});
}

WeightScheme WeightScheme::tabulated(std::vector<double> knots_u, std::vector<double> knots_w) {
    if (knots_u.size() != knots_w.size() || knots_u.size() < 2)
        throw std::invalid_argument("tabulated weight scheme: need >= 2 (u, what) knots");
    for (std::size_t i = 1; i < knots_u.size(); ++i)
        if (!(knots_u[i - 1] < knots_u[i]))
            throw std::invalid_argument("tabulated weight scheme: knots must be strictly increasing in u");
    for (double w : knots_w)
        if (!(w > 0.0))
            throw std::invalid_argument("tabulated weight scheme: settlement weights must be > 0");
    return WeightScheme(Kind::tabulated, 0.0, std::move(knots_u), std::move(knots_w));
}

double WeightScheme::settlement(double u) const {
    switch (kind_) {
        case Kind::uniform:
            return 1.0;
        case Kind::discounted:
            return std::exp(-rate_ * u);
        case Kind::tabulated: {
            if (u < knots_u_.front() || u > knots_u_.back())
                throw std::invalid_argument("tabulated weight scheme: u outside knot span");
            auto hi = std::upper_bound(knots_u_.begin(), knots_u_.end(), u);
            if (hi == knots_u_.end())
                return knots_w_.back();
            if (hi == knots_u_.begin())
                return knots_w_.front();
            const std::size_t i = static_cast<std::size_t>(hi - knots_u_.begin());
            const double s = (u - knots_u_[i - 1]) / (knots_u_[i] - knots_u_[i - 1]);
            return knots_w_[i - 1] + s * (knots_w_[i] - knots_w_[i - 1]);
        }
    }
    throw std::logic_error("unreachable");
}

double WeightScheme::settlement_integral(const DeliveryPeriod& period) const {
    const double a = period.tau1, b = period.tau2;
    switch (kind_) {
        case Kind::uniform:
            return b - a;
        case Kind::discounted:
            // int_a^b e^{-r u} du = e^{-r a} (1 - e^{-r (b-a)}) / r
            return std::exp(-rate_ * a) * (-std::expm1(-rate_ * (b - a))) / rate_;
        case Kind::tabulated: {
            if (a < knots_u_.front() || b > knots_u_.back())
                throw std::invalid_argument("tabulated weight scheme: period outside knot span");
            // Exact trapezoid over the piecewise-linear settlement.
            double acc = 0.0;
            for (std::size_t i = 1; i < knots_u_.size(); ++i) {
                const double lo = std::max(a, knots_u_[i - 1]);
                const double hi = std::min(b, knots_u_[i]);
                if (lo >= hi)
                    continue;
                acc += 0.5 * (settlement(lo) + settlement(hi)) * (hi - lo);
            }
            return acc;
        }
    }
    throw std::logic_error("unreachable");
}

double density(const WeightScheme& scheme, double u, const DeliveryPeriod& period) {
    if (u < period.tau1 || u > period.tau2)
        throw std::domain_error("density: u outside the delivery period");
    return scheme.settlement(u) / scheme.settlement_integral(period);
}

DeliveryAverager::DeliveryAverager(const WeightScheme& scheme, const DeliveryPeriod& period,
                                   const QuadratureRule& quad)
    : period_(period) {
    const GaussLegendre rule(quad.order);
    const double mid = 0.5 * (period.tau1 + period.tau2);
    const double half = 0.5 * period.length();
    const double norm = scheme.settlement_integral(period);
    nodes_.resize(rule.nodes.size());
    weights_.resize(rule.nodes.size());
    double sum = 0.0;
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
        nodes_[j] = mid + half * rule.nodes[j];
        weights_[j] = rule.weights[j] * half * scheme.settlement(nodes_[j]) / norm;
        sum += weights_[j];
    }
    // Force the discrete weights to sum to exactly one so the weighted
    // AM-GM ordering of the swap averages holds pathwise, not just in
    // exact arithmetic.
    for (double& w : weights_)
        w /= sum;
    // Last weight takes the residual: the prefix sum lies in [0.5, 1], so
    // 1 - prefix is exact (Sterbenz) and the running total lands on 1.0.
    double prefix = 0.0;
    for (std::size_t j = 0; j + 1 < weights_.size(); ++j)
        prefix += weights_[j];
    weights_.back() = 1.0 - prefix;
}

double expect(const std::function<double(double)>& g, const WeightScheme& scheme,
              const DeliveryPeriod& period, const QuadratureRule& quad) {
    return DeliveryAverager(scheme, period, quad).expect(g);
}

double variance(const std::function<double(double)>& g, const WeightScheme& scheme,
                const DeliveryPeriod& period, const QuadratureRule& quad) {
    return DeliveryAverager(scheme, period, quad).variance(g);
}

}  // namespace elswap
