#include "elswap/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace elswap {

InitialCurve InitialCurve::constant(double f0) {
    if (!(f0 > 0.0))
        throw std::invalid_argument("initial curve: f(0, tau) must be > 0");
    InitialCurve c;
    c.f0_ = f0;
    return c;
}

InitialCurve InitialCurve::tabulated(std::vector<double> taus, std::vector<double> values) {
    if (taus.size() != values.size() || taus.size() < 2)
        throw std::invalid_argument("initial curve: need >= 2 (tau, f) knots");
    for (std::size_t i = 1; i < taus.size(); ++i)
        if (!(taus[i - 1] < taus[i]))
            throw std::invalid_argument("initial curve: tau knots must be strictly increasing");
    for (double v : values)
        if (!(v > 0.0))
            throw std::invalid_argument("initial curve: f(0, tau) must be > 0");
    InitialCurve c;
    c.constant_ = false;
    c.taus_ = std::move(taus);
    c.values_ = std::move(values);
    return c;
}

double InitialCurve::operator()(double tau) const {
    if (constant_)
        return f0_;
    if (tau < taus_.front() || tau > taus_.back())
        throw std::domain_error("initial curve: tau outside the knot span");
    auto hi = std::lower_bound(taus_.begin(), taus_.end(), tau);
    std::size_t i = static_cast<std::size_t>(hi - taus_.begin());
    if (i == 0)
        return values_.front();
    if (i == taus_.size())
        i = taus_.size() - 1;
    const double s = (tau - taus_[i - 1]) / (taus_[i] - taus_[i - 1]);
    return values_[i - 1] + s * (values_[i] - values_[i - 1]);
}

namespace {
void check_exponential_domain(const JumpSpec& jumps) {
    if (jumps.levy.dist.kind() != JumpSizeDistribution::Kind::exponential)
        return;
    const double sup_eta = jumps.eta.sup();
    if (!jumps.levy.dist.mgf_admissible(sup_eta))
        throw std::invalid_argument(
            "model assembly: sup eta(t, u) must stay below lambda_j for exponential jump sizes");
}
}  // namespace

FuturesModel FuturesModel::artificial(VolatilityCurve sigma, InitialCurve f0,
                                      std::optional<JumpSpec> jumps) {
    if (jumps)
        check_exponential_domain(*jumps);
    return FuturesModel{MeasureTag::artificial, std::move(sigma), std::move(f0), std::move(jumps),
                        std::nullopt};
}

FuturesModel FuturesModel::physical(VolatilityCurve sigma, InitialCurve f0, PhysicalDrift drift,
                                    std::optional<JumpSpec> jumps) {
    if (jumps)
        check_exponential_domain(*jumps);
    return FuturesModel{MeasureTag::physical, std::move(sigma), std::move(f0), std::move(jumps),
                        std::move(drift)};
}

TimeGrid::TimeGrid(int steps, double horizon_years, long paths, std::uint64_t seed_value,
                   std::vector<int> cps)
    : t_steps(steps), horizon(horizon_years), n_paths(paths), seed(seed_value),
      checkpoints(std::move(cps)) {
    if (t_steps < 1)
        throw std::invalid_argument("time grid: t_steps must be >= 1");
    if (!(horizon > 0.0))
        throw std::invalid_argument("time grid: horizon must be > 0");
    if (n_paths < 1)
        throw std::invalid_argument("time grid: n_paths must be >= 1");
    if (checkpoints.empty())
        checkpoints = spaced_checkpoints(t_steps, std::min(t_steps + 1, 9));
    if (checkpoints.front() != 0 || checkpoints.back() != t_steps)
        throw std::invalid_argument("time grid: checkpoints must start at 0 and end at t_steps");
    for (std::size_t i = 1; i < checkpoints.size(); ++i)
        if (!(checkpoints[i - 1] < checkpoints[i]))
            throw std::invalid_argument("time grid: checkpoints must be strictly increasing");
}

std::vector<double> TimeGrid::checkpoint_times() const {
    std::vector<double> ts;
    ts.reserve(checkpoints.size());
    for (int k : checkpoints)
        ts.push_back(time(k));
    return ts;
}

std::vector<int> TimeGrid::spaced_checkpoints(int t_steps, int count) {
    count = std::max(2, std::min(count, t_steps + 1));
    std::vector<int> cps;
    cps.reserve(count);
    for (int i = 0; i < count; ++i) {
        const int k = static_cast<int>(std::llround(static_cast<double>(i) * t_steps / (count - 1)));
        if (cps.empty() || cps.back() != k)
            cps.push_back(k);
    }
    if (cps.back() != t_steps)
        cps.push_back(t_steps);
    return cps;
}

SimGrid::SimGrid(TimeGrid t, const WeightScheme& scheme, const DeliveryPeriod& p,
                 const QuadratureRule& quad)
    : time(std::move(t)), period(p) {
    const DeliveryAverager avg(scheme, p, quad);
    nodes = avg.nodes();
    weights = avg.weights();
    if (time.horizon > period.tau1 + 1e-12)
        throw std::invalid_argument("sim grid: horizon must not exceed tau1");
}

}  // namespace elswap
