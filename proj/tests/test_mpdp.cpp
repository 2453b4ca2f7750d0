#include <doctest.h>

#include <cmath>

#include "elswap/mpdp.hpp"
#include "elswap/rng.hpp"

using namespace elswap;

namespace {

const DeliveryPeriod kYear(1.0, 2.0);
const WeightScheme kUniform = WeightScheme::uniform();
const QuadratureRule kQuad;

FuturesModel physical_model(VolatilityCurve sigma, std::optional<JumpSpec> jumps, double mu0,
                            double kappa0) {
    return FuturesModel::physical(std::move(sigma), InitialCurve::constant(30.0),
                                  PhysicalDrift{DriftCurve::constant(mu0),
                                                MeanReversion::constant(kappa0)},
                                  std::move(jumps));
}

}  // namespace

TEST_CASE("diffusion MPDP") {
    CHECK(mpdp_diffusion(VolatilityCurve::constant(0.4), kUniform, kYear, 0.2, kQuad) == 0.0);

    // full-year seasonal: V = b^2/2, E = a, so Pi1 = -b^2/(4a) = -1/120
    CHECK(mpdp_diffusion(VolatilityCurve::seasonal(0.3, 0.1, 0.0), kUniform, kYear, 0.0, kQuad) ==
          doctest::Approx(-1.0 / 120.0).epsilon(1e-12));

    // Samuelson generic pipeline vs the closed form
    const DeliveryPeriod month(1.0, 1.0 + 1.0 / 12.0);
    const double generic =
        mpdp_diffusion(VolatilityCurve::samuelson(0.5, 1.5), kUniform, month, 0.5, kQuad);
    CHECK(generic == doctest::Approx(samuelson_mpdp(0.5, 1.5, 0.5, month)).epsilon(1e-10));
    CHECK(generic == doctest::Approx(-0.00014450542742770934).epsilon(1e-10));

    CHECK_THROWS_AS(
        mpdp_diffusion(VolatilityCurve::constant(0.4), kUniform, kYear, 1.5, kQuad),
        std::domain_error);
}

TEST_CASE("samuelson closed form vs quadrature on a randomized sweep with the Taylor regime") {
    const PathRng rng(31415, 0);
    for (std::uint32_t i = 0; i < 200; ++i) {
        const double lb = 0.1 + 0.9 * rng.uniform(i, Stream::diffusion, 0);
        double damping;
        if (i % 4 == 0)
            damping = 1e-14 + 1e-9 * rng.uniform(i, Stream::diffusion, 1);  // Taylor branch
        else
            damping = 0.05 + 4.0 * rng.uniform(i, Stream::diffusion, 1);
        const double t1 = 0.05 + 1.5 * rng.uniform(i, Stream::diffusion, 2);
        const DeliveryPeriod period(t1, t1 + 0.02 + rng.uniform(i, Stream::diffusion, 3));
        const double t = t1 * rng.uniform(i, Stream::diffusion, 4);
        const double closed = samuelson_mpdp(lb, damping, t, period);
        const double generic = mpdp_diffusion(VolatilityCurve::samuelson(lb, std::max(damping, 1e-300)),
                                              kUniform, period, t, QuadratureRule(96));
        CHECK(closed == doctest::Approx(generic).epsilon(1e-10).scale(1.0));
        CHECK(closed <= 0.0);
    }
}

TEST_CASE("jump MPDP") {
    const LevyMeasure levy_n(2.0, JumpSizeDistribution::normal(0.0, 0.3));

    CHECK(mpdp_jump(JumpCoefficientCurve::constant(0.5), levy_n, kUniform, kYear, 0.0, kQuad) == 0.0);

    // two-point eta {0.2, 0.6}: frozen oracle from the direct MGF evaluation
    const auto eta2 = JumpCoefficientCurve::piecewise_in_delivery({1.5}, {0.2, 0.6});
    const double pi2 = mpdp_jump(eta2, levy_n, kUniform, kYear, 0.0, kQuad);
    CHECK(pi2 == doctest::Approx(-0.2547465269193431).epsilon(1e-12));
    CHECK(pi2 < 0.0);

    // intensity cancels exactly
    const LevyMeasure levy_scaled(34.0, JumpSizeDistribution::normal(0.0, 0.3));
    CHECK(mpdp_jump(eta2, levy_scaled, kUniform, kYear, 0.0, kQuad) == pi2);

    // exponential law: constant eta gives zero through the inner expectation
    const LevyMeasure levy_e(1.0, JumpSizeDistribution::exponential(2.0));
    CHECK(mpdp_jump(JumpCoefficientCurve::constant(0.5), levy_e, kUniform, kYear, 0.0, kQuad) == 0.0);

    // exponential two-point value against the sign-corrected closed form
    // (lambda_j / E[eta]) (1 - E[(lambda_j - E[eta]) / (lambda_j - eta(U))])
    const double pi2e = mpdp_jump(eta2, levy_e, kUniform, kYear, 0.0, kQuad);
    CHECK(pi2e == doctest::Approx(-0.07936507936507908).epsilon(1e-12));
    const double closed = (2.0 / 0.4) * (1.0 - 0.5 * ((2.0 - 0.4) / (2.0 - 0.2) + (2.0 - 0.4) / (2.0 - 0.6)));
    CHECK(pi2e == doctest::Approx(closed).epsilon(1e-12));

    // symmetric eta around zero: E[eta] = 0 degenerates the denominator
    const auto eta_sym = JumpCoefficientCurve::piecewise_in_delivery({1.5}, {-0.3, 0.3});
    CHECK_THROWS_WITH_AS(mpdp_jump(eta_sym, levy_n, kUniform, kYear, 0.0, kQuad),
                         doctest::Contains("near-zero denominator"), std::runtime_error);
}

TEST_CASE("true market price of risk") {
    SUBCASE("pure half-variance when mu and kappa vanish") {
        const auto m = physical_model(VolatilityCurve::constant(0.4), std::nullopt, 0.0, 0.0);
        const MarketPriceP mp = mpr_true(m, 3.3, 0.0, kUniform, kYear, kQuad);
        CHECK(mp.pi1 == doctest::Approx(0.2).epsilon(1e-14));
        CHECK(mp.pi2 == 0.0);
    }
    SUBCASE("jump component from the MGF formula") {
        const JumpSpec jumps{JumpCoefficientCurve::constant(0.5),
                             LevyMeasure(3.0, JumpSizeDistribution::normal(0.1, 0.2),
                                         MeasureTag::physical)};
        const auto m = physical_model(VolatilityCurve::constant(0.4), jumps, 0.0, 0.0);
        const MarketPriceP mp = mpr_true(m, 3.3, 0.0, kUniform, kYear, kQuad);
        CHECK(mp.pi2 == doctest::Approx(0.11567993579541203).epsilon(1e-12));
    }
    SUBCASE("zero-mean jump sizes push pi2 to one") {
        const JumpSpec jumps{JumpCoefficientCurve::constant(0.5),
                             LevyMeasure(3.0, JumpSizeDistribution::normal(0.0, 0.2),
                                         MeasureTag::physical)};
        const auto m = physical_model(VolatilityCurve::constant(0.4), jumps, 0.0, 0.0);
        const MarketPriceP mp = mpr_true(m, 3.3, 0.0, kUniform, kYear, kQuad);
        CHECK(mp.pi1 == doctest::Approx(0.2).epsilon(1e-14));
        CHECK(mp.pi2 == 1.0);
        const auto rep = validate_jump_mpr(mp.pi2, jumps.levy.dist);
        CHECK_FALSE(rep.holds_ae);
    }
    SUBCASE("pi1 is affine in the log swap state with slope -kappa/E[sigma]") {
        const auto m = physical_model(VolatilityCurve::seasonal(0.3, 0.1, 0.1), std::nullopt, 0.4, 1.7);
        const double e_sigma = expect([&](double u) { return m.sigma(0.2, u); }, kUniform, kYear, kQuad);
        const double h = 1e-4;
        const double up = mpr_true(m, 3.3 + h, 0.2, kUniform, kYear, kQuad).pi1;
        const double dn = mpr_true(m, 3.3 - h, 0.2, kUniform, kYear, kQuad).pi1;
        CHECK((up - dn) / (2.0 * h) == doctest::Approx(-1.7 / e_sigma).epsilon(1e-9));
    }
}

TEST_CASE("classical market price of risk and its relation to the true one") {
    SUBCASE("constant sigma: identical pi1") {
        const auto m = physical_model(VolatilityCurve::constant(0.4), std::nullopt, 0.3, 1.1);
        const double t = 0.4, lnf = 3.1;
        CHECK(mpr_classical(m, lnf, t, kUniform, kYear, kQuad).pi1 ==
              doctest::Approx(mpr_true(m, lnf, t, kUniform, kYear, kQuad).pi1).epsilon(1e-14));
    }
    SUBCASE("constant eta: identical pi2") {
        const JumpSpec jumps{JumpCoefficientCurve::constant(0.4),
                             LevyMeasure(2.0, JumpSizeDistribution::exponential(3.0),
                                         MeasureTag::physical)};
        const auto m = physical_model(VolatilityCurve::seasonal(0.3, 0.1, 0.0), jumps, 0.3, 1.1);
        CHECK(mpr_classical(m, 3.1, 0.2, kUniform, kYear, kQuad).pi2 ==
              doctest::Approx(mpr_true(m, 3.1, 0.2, kUniform, kYear, kQuad).pi2).epsilon(1e-13));
    }
    SUBCASE("seasonal sigma: the gap is exactly V/(2E)") {
        const auto m = physical_model(VolatilityCurve::seasonal(0.3, 0.1, 0.2), std::nullopt, 0.3, 1.1);
        const double t = 0.2, lnf = 3.1;
        const double gap = mpr_classical(m, lnf, t, kUniform, kYear, kQuad).pi1 -
                           mpr_true(m, lnf, t, kUniform, kYear, kQuad).pi1;
        const double v = variance([&](double u) { return m.sigma(t, u); }, kUniform, kYear, kQuad);
        const double e = expect([&](double u) { return m.sigma(t, u); }, kUniform, kYear, kQuad);
        CHECK(gap == doctest::Approx(0.5 * v / e).epsilon(1e-12));
    }
}

TEST_CASE("spread properties and the decomposition identity") {
    const JumpSpec jumps{JumpCoefficientCurve::piecewise_in_delivery({1.5}, {0.2, 0.6}),
                         LevyMeasure(2.0, JumpSizeDistribution::normal(0.1, 0.3),
                                     MeasureTag::physical)};
    const auto m = physical_model(VolatilityCurve::seasonal(0.3, 0.1, 0.1), jumps, 0.4, 1.3);

    SUBCASE("degenerate components vanish") {
        const JumpSpec cj{JumpCoefficientCurve::constant(0.4), jumps.levy};
        const auto m_const_eta = physical_model(VolatilityCurve::seasonal(0.3, 0.1, 0.1), cj, 0.4, 1.3);
        CHECK(spread(m_const_eta, 0.2, kUniform, kYear, kQuad).pi2_bar == 0.0);

        const auto m_const_sigma = physical_model(VolatilityCurve::constant(0.4), jumps, 0.4, 1.3);
        CHECK(spread(m_const_sigma, 0.2, kUniform, kYear, kQuad).pi1_bar == 0.0);
    }
    SUBCASE("spread equals the true/classical difference") {
        const double t = 0.3, lnf = 3.4;
        const SpreadQQtilde sp = spread(m, t, kUniform, kYear, kQuad);
        const MarketPriceP pq = mpr_classical(m, lnf, t, kUniform, kYear, kQuad);
        const MarketPriceP pqt = mpr_true(m, lnf, t, kUniform, kYear, kQuad);
        CHECK(pqt.pi1 == doctest::Approx(pq.pi1 + sp.pi1_bar).epsilon(1e-12));
        CHECK(pqt.pi2 == doctest::Approx(pq.pi2 + sp.pi2_bar).epsilon(1e-12));
    }
    SUBCASE("remark identity: spread2 = Pi2_qqt (1 - Pi2_pq)") {
        const double t = 0.3;
        const SpreadQQtilde sp = spread(m, t, kUniform, kYear, kQuad);
        const double pi2_qqt = mpdp_jump(jumps.eta, jumps.levy, kUniform, kYear, t, kQuad);
        const double pi2_pq = mpr_classical(m, 3.4, t, kUniform, kYear, kQuad).pi2;
        CHECK(sp.pi2_bar == doctest::Approx(pi2_qqt * (1.0 - pi2_pq)).epsilon(1e-12));
    }
}

TEST_CASE("jump MPR validity report") {
    const auto normal = JumpSizeDistribution::normal(0.1, 0.2);
    const auto expo = JumpSizeDistribution::exponential(2.0);

    CHECK(validate_jump_mpr(0.0, normal).holds_ae);
    CHECK(validate_jump_mpr(-0.3, expo).holds_ae);
    CHECK(validate_jump_mpr(0.0, expo).violation_mass == 0.0);

    const auto rep = validate_jump_mpr(1.0, normal);
    CHECK_FALSE(rep.holds_ae);
    CHECK(rep.violation_mass == doctest::Approx(3.3976731247300535e-6).epsilon(1e-9));

    // positive pi2 with positive support: threshold inside the support
    const auto rep_e = validate_jump_mpr(0.5, expo);
    CHECK_FALSE(rep_e.holds_ae);
    CHECK(rep_e.violation_mass == doctest::Approx(std::exp(-4.0)).epsilon(1e-12));
}
