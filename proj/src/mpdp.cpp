#include "elswap/mpdp.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace elswap {

namespace {

struct JumpAverages {
    double e_eta;     // E_U[eta(t, U)]
    double eu_m;      // E_U[M(eta(t, U))]
    double m_of_e;    // M(E_U[eta(t, U)])
};

JumpAverages jump_averages(const JumpCoefficientCurve& eta, const JumpSizeDistribution& dist,
                           const DeliveryAverager& avg, double t) {
    JumpAverages a{};
    a.e_eta = avg.expect([&](double u) { return eta(t, u); });
    a.eu_m = avg.expect([&](double u) {
        const double e = eta(t, u);
        if (!dist.mgf_admissible(e))
            throw std::domain_error("jump MPDP: eta(t, u) outside the MGF domain");
        return dist.mgf(e);
    });
    if (!dist.mgf_admissible(a.e_eta))
        throw std::domain_error("jump MPDP: E[eta(t, U)] outside the MGF domain");
    a.m_of_e = dist.mgf(a.e_eta);
    return a;
}

/// -(E_U[M(eta)] - M(E[eta])) / (M(E[eta]) - 1), intensity-free.
double jump_mpdp_from(const JumpAverages& a, const JumpCoefficientCurve& eta) {
    const double num = a.eu_m - a.m_of_e;
    const double den = a.m_of_e - 1.0;
    if (eta.delivery_independent() || num == 0.0)
        return 0.0;
    if (std::abs(den) < 1e-12) {
        std::ostringstream os;
        os << "jump MPDP: near-zero denominator M(E[eta]) - 1 = " << den
           << " with delivery-dependent eta (E[eta] = " << a.e_eta << ")";
        throw std::runtime_error(os.str());
    }
    return -num / den;
}

const PhysicalDrift& require_physical(const FuturesModel& model) {
    if (model.measure != MeasureTag::physical || !model.drift)
        throw std::invalid_argument("market price of risk: a physical-measure model is required");
    return *model.drift;
}

}  // namespace

double mpdp_diffusion(const VolatilityCurve& vol, const WeightScheme& scheme,
                      const DeliveryPeriod& period, double t, const QuadratureRule& quad) {
    if (t > period.tau1)
        throw std::domain_error("diffusion MPDP: t must not exceed tau1");
    const DeliveryAverager avg(scheme, period, quad);
    const double mean = avg.expect([&](double u) { return vol(t, u); });
    if (!(mean > 0.0))
        throw std::runtime_error("diffusion MPDP: degenerate model, E[sigma(t, U)] must be > 0");
    const double var = avg.variance([&](double u) { return vol(t, u); });
    return -0.5 * var / mean;
}

double mpdp_jump(const JumpCoefficientCurve& eta, const LevyMeasure& levy_q,
                 const WeightScheme& scheme, const DeliveryPeriod& period, double t,
                 const QuadratureRule& quad) {
    if (t > period.tau1)
        throw std::domain_error("jump MPDP: t must not exceed tau1");
    const DeliveryAverager avg(scheme, period, quad);
    return jump_mpdp_from(jump_averages(eta, levy_q.dist, avg, t), eta);
}

MpdpQ mpdp_q(const FuturesModel& model_q, const WeightScheme& scheme,
             const DeliveryPeriod& period, double t, const QuadratureRule& quad) {
    MpdpQ out{0.0, 0.0, t, period};
    out.pi1 = mpdp_diffusion(model_q.sigma, scheme, period, t, quad);
    if (model_q.jumps)
        out.pi2 = mpdp_jump(model_q.jumps->eta, model_q.jumps->levy, scheme, period, t, quad);
    return out;
}

namespace {

MarketPriceP mpr_impl(const FuturesModel& model, double ln_f, double t, const WeightScheme& scheme,
                      const DeliveryPeriod& period, const QuadratureRule& quad, MprFlavor flavor) {
    const PhysicalDrift& drift = require_physical(model);
    const DeliveryAverager avg(scheme, period, quad);

    const double e_mu = avg.expect([&](double u) { return drift.mu(t, u); });
    const double e_sigma = avg.expect([&](double u) { return model.sigma(t, u); });
    if (!(e_sigma > 0.0))
        throw std::runtime_error("market price of risk: E[sigma(t, U)] must be > 0");
    const double kappa = drift.kappa(t);

    // True flavor divides E[sigma]^2/2, classical E[sigma^2]/2.
    double half_sq;
    if (flavor == MprFlavor::true_swap) {
        half_sq = 0.5 * e_sigma * e_sigma;
    } else {
        half_sq = 0.5 * avg.expect([&](double u) {
            const double s = model.sigma(t, u);
            return s * s;
        });
    }
    const double pi1 = (e_mu - kappa * ln_f + half_sq) / e_sigma;

    double pi2 = 0.0;
    if (model.jumps) {
        const auto a = jump_averages(model.jumps->eta, model.jumps->levy.dist, avg, t);
        const double den = (flavor == MprFlavor::true_swap ? a.m_of_e : a.eu_m) - 1.0;
        if (std::abs(den) < 1e-12)
            throw std::runtime_error("market price of jump risk: degenerate denominator M - 1");
        pi2 = 1.0 - model.jumps->levy.dist.moment(1) * a.e_eta / den;
    }
    return MarketPriceP{pi1, pi2, flavor, t, period, ln_f};
}

}  // namespace

MarketPriceP mpr_true(const FuturesModel& model_p, double ln_f, double t,
                      const WeightScheme& scheme, const DeliveryPeriod& period,
                      const QuadratureRule& quad) {
    return mpr_impl(model_p, ln_f, t, scheme, period, quad, MprFlavor::true_swap);
}

MarketPriceP mpr_classical(const FuturesModel& model_p, double ln_f, double t,
                           const WeightScheme& scheme, const DeliveryPeriod& period,
                           const QuadratureRule& quad) {
    return mpr_impl(model_p, ln_f, t, scheme, period, quad, MprFlavor::classical);
}

SpreadQQtilde spread(const FuturesModel& model_p, double t, const WeightScheme& scheme,
                     const DeliveryPeriod& period, const QuadratureRule& quad) {
    require_physical(model_p);
    SpreadQQtilde out{0.0, 0.0};
    out.pi1_bar = mpdp_diffusion(model_p.sigma, scheme, period, t, quad);
    if (model_p.jumps) {
        const DeliveryAverager avg(scheme, period, quad);
        const auto a = jump_averages(model_p.jumps->eta, model_p.jumps->levy.dist, avg, t);
        const double num = a.eu_m - a.m_of_e;
        if (model_p.jumps->eta.delivery_independent() || num == 0.0) {
            out.pi2_bar = 0.0;
        } else {
            const double den1 = a.eu_m - 1.0;
            const double den2 = a.m_of_e - 1.0;
            if (std::abs(den1) < 1e-12 || std::abs(den2) < 1e-12)
                throw std::runtime_error("jump risk spread: degenerate denominator M - 1");
            out.pi2_bar = -a.e_eta * model_p.jumps->levy.dist.moment(1) * num / (den1 * den2);
        }
    }
    return out;
}

JumpMprValidity validate_jump_mpr(double pi2, const JumpSizeDistribution& dist) {
    JumpMprValidity rep{true, 0.0, {}};
    if (pi2 == 0.0) {
        rep.note = "pi2 = 0: condition pi2 * z < 1 is vacuous";
        return rep;
    }
    // pi2 z < 1 fails on {z > 1/pi2} for pi2 > 0 and on {z < 1/pi2} for pi2 < 0.
    const double threshold = 1.0 / pi2;
    const double mass = pi2 > 0.0 ? dist.tail_mass_above(threshold) : dist.tail_mass_below(threshold);
    rep.violation_mass = mass;
    rep.holds_ae = (mass == 0.0);
    std::ostringstream os;
    if (rep.holds_ae) {
        os << "pi2 * z < 1 holds G-a.e. (threshold z = " << threshold << " outside the support)";
    } else {
        os << "pi2 * z < 1 violated on a set of G-mass " << mass << " (threshold z = " << threshold
           << "); the positivity of the jump density factor is not guaranteed";
    }
    rep.note = os.str();
    return rep;
}

}  // namespace elswap
