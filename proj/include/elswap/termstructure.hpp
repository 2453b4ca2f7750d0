#pragma once

#include <utility>
#include <vector>

#include "elswap/delivery.hpp"

namespace elswap {

namespace detail {
/// Bilinear interpolation table over (t, u). Out-of-grid lookups throw;
/// tabulated curves never extrapolate.
struct Grid2d {
    std::vector<double> ts;
    std::vector<double> us;
    std::vector<double> values;  // row-major [t][u]

    Grid2d() = default;
    Grid2d(std::vector<double> t, std::vector<double> u, std::vector<double> v);
    double at(double t, double u) const;
    double max_value() const;
};
}  // namespace detail

/// Futures volatility sigma(t, u) > 0 in trading time t and delivery time u.
///
/// The seasonal form is S1(u) = a + b cos(2 pi (u + c)) with a > b > 0,
/// c in [0, 1); the Samuelson form is S2(u - t) = lambda_bar e^{-Lambda (u-t)}.
class VolatilityCurve {
  public:
    enum class Kind { constant, seasonal, samuelson, tabulated };

    static VolatilityCurve constant(double sigma0);
    static VolatilityCurve seasonal(double a, double b, double c);
    static VolatilityCurve samuelson(double lambda_bar, double damping);
    static VolatilityCurve tabulated(std::vector<double> ts, std::vector<double> us,
                                     std::vector<double> values);

    double operator()(double t, double u) const;
    Kind kind() const { return kind_; }
    bool delivery_independent() const { return kind_ == Kind::constant; }

    double a() const { return p1_; }
    double b() const { return p2_; }
    double c() const { return p3_; }
    double lambda_bar() const { return p1_; }
    double damping() const { return p2_; }

  private:
    VolatilityCurve(Kind k, double p1, double p2, double p3) : kind_(k), p1_(p1), p2_(p2), p3_(p3) {}

    Kind kind_;
    double p1_ = 0.0, p2_ = 0.0, p3_ = 0.0;
    detail::Grid2d grid_;
};

/// Jump coefficient eta(t, u); finite, may be negative.
class JumpCoefficientCurve {
  public:
    enum class Kind { constant, piecewise, tabulated };

    static JumpCoefficientCurve constant(double eta0);
    /// Piecewise-constant in delivery time: levels[i] on (breaks[i-1], breaks[i]],
    /// with levels.size() == breaks.size() + 1 and the last level open-ended.
    static JumpCoefficientCurve piecewise_in_delivery(std::vector<double> breaks,
                                                      std::vector<double> levels);
    static JumpCoefficientCurve tabulated(std::vector<double> ts, std::vector<double> us,
                                          std::vector<double> values);

    double operator()(double t, double u) const;
    Kind kind() const { return kind_; }
    bool delivery_independent() const { return kind_ == Kind::constant; }
    /// Supremum of eta over its domain (used for the exponential MGF guard).
    double sup() const;

  private:
    JumpCoefficientCurve(Kind k) : kind_(k) {}

    Kind kind_;
    double eta0_ = 0.0;
    std::vector<double> breaks_;
    std::vector<double> levels_;
    detail::Grid2d grid_;
};

/// Deterministic drift mu(t, u) under the physical measure.
class DriftCurve {
  public:
    enum class Kind { constant, tabulated };

    static DriftCurve constant(double mu0);
    static DriftCurve tabulated(std::vector<double> ts, std::vector<double> us,
                                std::vector<double> values);

    double operator()(double t, double u) const;
    Kind kind() const { return kind_; }

  private:
    DriftCurve(Kind k, double m) : kind_(k), mu0_(m) {}

    Kind kind_;
    double mu0_ = 0.0;
    detail::Grid2d grid_;
};

/// Mean-reversion speed kappa(t) >= 0; structurally independent of delivery time.
class MeanReversion {
  public:
    enum class Kind { constant, tabulated };

    static MeanReversion constant(double kappa0);
    /// Piecewise-linear kappa(t) through (t_i, kappa_i) knots.
    static MeanReversion tabulated(std::vector<double> ts, std::vector<double> ks);

    double operator()(double t) const;
    /// Exact integral of kappa over [t0, t1] (trapezoid along the segments).
    double integral(double t0, double t1) const;
    Kind kind() const { return kind_; }

  private:
    MeanReversion(Kind k, double kk) : kind_(k), kappa0_(kk) {}

    Kind kind_;
    double kappa0_ = 0.0;
    std::vector<double> ts_;
    std::vector<double> ks_;
};

/// (E[S1(U)], E[S1(U)^2]) for the seasonal volatility. Uses the closed
/// sine forms under a uniform (one-time settlement) scheme, quadrature
/// otherwise.
std::pair<double, double> seasonal_moments(double a, double b, double c,
                                           const DeliveryPeriod& period,
                                           const WeightScheme& scheme,
                                           const QuadratureRule& quad);

/// Closed-form MPDP of diffusion risk for the Samuelson volatility,
///   Pi1(t) = -1/2 (Lbarbar - Lbar^2)/Lbar * e^{-Lambda (tau1 - t)},
/// with Lbar = lambda_bar (1-e^{-Lambda D})/(Lambda D) and
/// Lbarbar = lambda_bar^2 (1-e^{-2 Lambda D})/(2 Lambda D), D = tau2 - tau1.
/// The Lambda -> 0 degeneracy is handled by a 3-term Taylor expansion.
double samuelson_mpdp(double lambda_bar, double damping, double t, const DeliveryPeriod& period);

}  // namespace elswap
