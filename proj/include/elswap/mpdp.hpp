#pragma once

#include <string>

#include "elswap/delivery.hpp"
#include "elswap/levy.hpp"
#include "elswap/model.hpp"
#include "elswap/termstructure.hpp"

namespace elswap {

/// Market price of delivery-period risk moving the artificial measure Q to
/// the swap's martingale measure Q-tilde. Both components are <= 0 by
/// Jensen's inequality.
struct MpdpQ {
    double pi1;  // diffusion: -V[sigma(t,U)] / (2 E[sigma(t,U)])
    double pi2;  // jump:     -(E_U[M(eta)] - M(E_U[eta])) / (M(E_U[eta]) - 1)
    double t;
    DeliveryPeriod period;
};

enum class MprFlavor {
    true_swap,  // Pi^{P->Qtilde}, geometric averaging
    classical,  // Pi^{P->Q}, approximated averaging
};

/// Market price of risk under the physical measure; pi1 depends on the
/// log swap price state.
struct MarketPriceP {
    double pi1;
    double pi2;
    MprFlavor flavor;
    double t;
    DeliveryPeriod period;
    double ln_f_state;
};

/// Spread between true and classical market prices of risk,
/// Pi_bar_j = Pi_j^{P->Qtilde} - Pi_j^{P->Q}. Independent of the jump
/// intensity; pi1_bar coincides with the diffusion MPDP.
struct SpreadQQtilde {
    double pi1_bar;
    double pi2_bar;
};

/// Whether Pi2 * z < 1 holds G-almost everywhere, with the offending
/// quantile mass when it does not (unbounded support).
struct JumpMprValidity {
    bool holds_ae;
    double violation_mass;
    std::string note;
};

double mpdp_diffusion(const VolatilityCurve& vol, const WeightScheme& scheme,
                      const DeliveryPeriod& period, double t, const QuadratureRule& quad);

double mpdp_jump(const JumpCoefficientCurve& eta, const LevyMeasure& levy_q,
                 const WeightScheme& scheme, const DeliveryPeriod& period, double t,
                 const QuadratureRule& quad);

/// Both MPDP components of a Q-measure model (pi2 = 0 without jumps).
MpdpQ mpdp_q(const FuturesModel& model_q, const WeightScheme& scheme,
             const DeliveryPeriod& period, double t, const QuadratureRule& quad);

MarketPriceP mpr_true(const FuturesModel& model_p, double ln_f, double t,
                      const WeightScheme& scheme, const DeliveryPeriod& period,
                      const QuadratureRule& quad);

MarketPriceP mpr_classical(const FuturesModel& model_p, double ln_f, double t,
                           const WeightScheme& scheme, const DeliveryPeriod& period,
                           const QuadratureRule& quad);

SpreadQQtilde spread(const FuturesModel& model_p, double t, const WeightScheme& scheme,
                     const DeliveryPeriod& period, const QuadratureRule& quad);

JumpMprValidity validate_jump_mpr(double pi2, const JumpSizeDistribution& dist);

}  // namespace elswap
