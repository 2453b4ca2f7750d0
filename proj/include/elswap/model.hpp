#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "elswap/delivery.hpp"
#include "elswap/levy.hpp"
#include "elswap/termstructure.hpp"

namespace elswap {

/// Initial futures curve f(0, tau) > 0.
class InitialCurve {
  public:
    static InitialCurve constant(double f0);
    static InitialCurve tabulated(std::vector<double> taus, std::vector<double> values);

    double operator()(double tau) const;

  private:
    InitialCurve() = default;

    bool constant_ = true;
    double f0_ = 1.0;
    std::vector<double> taus_;
    std::vector<double> values_;
};

struct JumpSpec {
    JumpCoefficientCurve eta;
    LevyMeasure levy;
};

struct PhysicalDrift {
    DriftCurve mu;
    MeanReversion kappa;
};

/// Jump-diffusion futures curve model. Under the artificial measure Q the
/// curve is a martingale and carries no drift specification; under the
/// physical measure P the log-price mean-reverts at speed kappa(t) toward
/// the level set by mu(t, u).
struct FuturesModel {
    MeasureTag measure;
    VolatilityCurve sigma;
    InitialCurve f0;
    std::optional<JumpSpec> jumps;
    std::optional<PhysicalDrift> drift;

    static FuturesModel artificial(VolatilityCurve sigma, InitialCurve f0,
                                   std::optional<JumpSpec> jumps = std::nullopt);
    static FuturesModel physical(VolatilityCurve sigma, InitialCurve f0, PhysicalDrift drift,
                                 std::optional<JumpSpec> jumps = std::nullopt);

    double lambda() const { return jumps ? jumps->levy.intensity : 0.0; }
};

/// Trading-time discretization plus the Monte Carlo extent.
struct TimeGrid {
    int t_steps;
    double horizon;  // tau1 for swap runs
    long n_paths;
    std::uint64_t seed;
    /// Step indices where path values are recorded; ascending, first 0,
    /// last t_steps. All derived series still consume every step.
    std::vector<int> checkpoints;

    TimeGrid(int steps, double horizon_years, long paths, std::uint64_t seed_value,
             std::vector<int> cps = {});

    double dt() const { return horizon / t_steps; }
    double time(int k) const { return horizon * k / t_steps; }
    std::vector<double> checkpoint_times() const;

    static std::vector<int> spaced_checkpoints(int t_steps, int count);
};

/// Delivery discretization shared between analytic E[.] and pathwise
/// averaging: the nodes are exactly the delivery module's quadrature nodes.
struct SimGrid {
    TimeGrid time;
    DeliveryPeriod period;
    std::vector<double> nodes;
    std::vector<double> weights;

    SimGrid(TimeGrid t, const WeightScheme& scheme, const DeliveryPeriod& p,
            const QuadratureRule& quad);

    int n_nodes() const { return static_cast<int>(nodes.size()); }
};

}  // namespace elswap
