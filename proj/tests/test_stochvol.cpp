#include <doctest.h>

#include <cmath>

#include "elswap/harness.hpp"
#include "elswap/rng.hpp"
#include "elswap/stochvol.hpp"

using namespace elswap;

namespace {

CirParams base_params() { return CirParams(2.0, 0.04, 0.25, 0.05, -0.4, 0.15); }

FuturesModel stochvol_model(std::optional<JumpSpec> jumps) {
    const double f0 = 30.0;
    return FuturesModel::physical(
        VolatilityCurve::seasonal(1.4, 0.5, 0.15), InitialCurve::constant(f0),
        PhysicalDrift{DriftCurve::constant(1.2 * std::log(f0)), MeanReversion::constant(1.2)},
        std::move(jumps));
}

}  // namespace

TEST_CASE("feller condition flags") {
    CHECK(check_feller(CirParams(2.0, 0.04, 0.2, 0.04, 0.0, 0.0)).extended);  // 0.04 < 0.08
    CHECK(check_feller(CirParams(2.0, 0.04, 0.2, 0.04, 0.0, 0.0)).classical);

    const double boundary = std::sqrt(2.0 * 0.04);  // sigma^2 = kappa theta
    const auto flags = check_feller(CirParams(2.0, 0.04, boundary, 0.04, 0.0, 0.0));
    CHECK_FALSE(flags.extended);
    CHECK(flags.classical);

    const auto huge = check_feller(CirParams(2.0, 0.04, 5.0, 0.04, 0.0, 0.0));
    CHECK_FALSE(huge.extended);
    CHECK_FALSE(huge.classical);

    CHECK_THROWS_AS(CirParams(0.0, 0.04, 0.2, 0.04, 0.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(CirParams(2.0, 0.04, 0.2, 0.04, 1.0, 0.0), std::domain_error);
}

TEST_CASE("extended Feller implies classical Feller on a randomized sweep") {
    const PathRng rng(13, 0);
    for (std::uint32_t i = 0; i < 300; ++i) {
        const double kappa = 0.1 + 5.0 * rng.uniform(i, Stream::diffusion, 0);
        const double theta = 0.005 + 0.3 * rng.uniform(i, Stream::diffusion, 1);
        const double sigma = 0.01 + 1.5 * rng.uniform(i, Stream::diffusion, 2);
        const auto flags = check_feller(CirParams(kappa, theta, sigma, 0.05, 0.0, 0.0));
        if (flags.extended)
            CHECK(flags.classical);
    }
}

TEST_CASE("exact CIR sampler: mean, stationarity, positivity") {
    SUBCASE("started at the stationary mean it stays there") {
        CirParams p(2.0, 0.04, 0.2, 0.04, 0.0, 0.0);
        TimeGrid grid(16, 1.0, 40000, 2121, TimeGrid::spaced_checkpoints(16, 5));
        const CirPaths nu = simulate_cir(p, grid);
        CHECK(nu.min_value > 0.0);
        for (std::size_t c = 0; c < grid.checkpoints.size(); ++c) {
            RunningStat st;
            for (long q = 0; q < nu.n_paths; ++q)
                st.add(nu.at(q, static_cast<int>(c)));
            const double z = c == 0 ? 0.0 : (st.mean() - 0.04) / st.se();
            CHECK(std::abs(z) <= 3.0);
        }
    }
    SUBCASE("transient mean matches theta + (nu0 - theta) e^{-kappa t}") {
        CirParams p(2.0, 0.04, 0.2, 0.09, 0.0, 0.0);
        TimeGrid grid(32, 1.0, 40000, 777, {0, 8, 16, 32});
        const CirPaths nu = simulate_cir(p, grid);
        const auto times = grid.checkpoint_times();
        for (std::size_t c = 1; c < times.size(); ++c) {
            RunningStat st;
            for (long q = 0; q < nu.n_paths; ++q)
                st.add(nu.at(q, static_cast<int>(c)));
            const double ref = cir_mean(p, times[c]);
            CHECK(std::abs(st.mean() - ref) <= 3.0 * st.se());
        }
        CHECK(cir_mean(p, 1.0) == doctest::Approx(0.046766764161830635).epsilon(1e-14));
    }
    SUBCASE("full-truncation Euler cross-check agrees with the exact sampler") {
        CirParams p = base_params();
        TimeGrid grid(64, 0.5, 20000, 3131, {0, 64});
        const CirPaths exact = simulate_cir(p, grid);
        RunningStat st_exact;
        for (long q = 0; q < exact.n_paths; ++q)
            st_exact.add(exact.at(q, 1));

        // test-only oracle: full-truncation Euler with its own stream
        RunningStat st_euler;
        const double dt = grid.dt();
        for (long q = 0; q < grid.n_paths; ++q) {
            const PathRng rng(998877, static_cast<std::uint64_t>(q));
            double nu = p.nu0;
            for (int k = 0; k < grid.t_steps; ++k) {
                const double plus = std::max(nu, 0.0);
                nu += p.kappa_nu * (p.theta_nu - plus) * dt +
                      p.sigma_nu * std::sqrt(plus * dt) *
                          rng.normal(static_cast<std::uint32_t>(k), Stream::vol_brownian, 0);
            }
            st_euler.add(std::max(nu, 0.0));
        }
        const double gap = std::abs(st_exact.mean() - st_euler.mean());
        CHECK(gap <= 3.0 * std::hypot(st_exact.se(), st_euler.se()) + 1e-4);
        CHECK(std::abs(st_exact.mean() - cir_mean(p, 0.5)) <= 3.0 * st_exact.se());
    }
}

TEST_CASE("inverse moments of the CIR variance") {
    SUBCASE("frozen variance in the vanishing vol-of-vol limit") {
        CirParams p(2.0, 0.04, 1e-14, 0.04, 0.0, 0.0);
        const auto m1 = inverse_moment_mc(p, 0.5, 1, 4000, 17);
        const auto m2 = inverse_moment_mc(p, 0.5, 2, 4000, 17);
        CHECK(m1.estimate == doctest::Approx(25.0).epsilon(1e-6));
        CHECK(m2.estimate == doctest::Approx(625.0).epsilon(1e-6));
        CHECK_FALSE(m1.feller_warning);
    }
    SUBCASE("stable under path doubling when extended Feller holds") {
        CirParams p(2.0, 0.04, 0.2, 0.04, 0.0, 0.0);
        for (int pw : {1, 2}) {
            const auto half = inverse_moment_mc(p, 0.5, pw, 40000, 23);
            const auto full = inverse_moment_mc(p, 0.5, pw, 80000, 23);
            CHECK(std::isfinite(half.estimate));
            CHECK(std::abs(half.estimate - full.estimate) <=
                  3.0 * std::hypot(half.std_error, full.std_error));
        }
    }
    SUBCASE("violated extended Feller still computes but warns") {
        CirParams p(2.0, 0.04, 0.3, 0.04, 0.0, 0.0);  // 0.09 > 0.08
        const auto est = inverse_moment_mc(p, 0.5, 2, 2000, 29);
        CHECK(est.feller_warning);
        CHECK(std::isfinite(est.estimate));
    }
}

TEST_CASE("three-factor density martingale check") {
    const DeliveryPeriod period(0.25, 0.5);
    SUBCASE("all kernels zero: Z is identically one") {
        TimeGrid time(16, 0.25, 64, 5, {0, 16});
        const SimGrid grid(std::move(time), WeightScheme::uniform(), period, QuadratureRule(8));
        MprSpec spec;
        spec.mode = MprSpec::Mode::zero;
        const auto est = martingale_check_stochvol(stochvol_model(std::nullopt), base_params(), spec, grid);
        CHECK(est.estimate == 1.0);
        CHECK(est.std_error == 0.0);
    }
    SUBCASE("constant pi1, no jumps, delta_nu = 0") {
        TimeGrid time(32, 0.25, 30000, 1251, {0, 32});
        const SimGrid grid(std::move(time), WeightScheme::uniform(), period, QuadratureRule(8));
        MprSpec spec;
        spec.mode = MprSpec::Mode::constant_pi1;
        spec.pi1_value = 0.4;
        CirParams p(2.0, 0.04, 0.25, 0.05, -0.4, 0.0);
        const auto est = martingale_check_stochvol(stochvol_model(std::nullopt), p, spec, grid);
        CHECK(std::abs(est.estimate - 1.0) <= 3.0 * est.std_error);
    }
    SUBCASE("full model: state-dependent pi1, jumps, Heston-constrained pi_nu") {
        TimeGrid time(32, 0.25, 30000, 424243, {0, 32});
        const SimGrid grid(std::move(time), WeightScheme::uniform(), period, QuadratureRule(12));
        MprSpec spec;  // true_mpr
        const JumpSpec jumps{JumpCoefficientCurve::piecewise_in_delivery({0.375}, {0.25, 0.55}),
                             LevyMeasure(3.0, JumpSizeDistribution::normal(0.08, 0.22),
                                         MeasureTag::physical)};
        const auto est =
            martingale_check_stochvol(stochvol_model(jumps), base_params(), spec, grid);
        CHECK(std::abs(est.estimate - 1.0) <= 3.0 * est.std_error);
    }
}

TEST_CASE("stochvol martingale check is reproducible across thread counts") {
    const DeliveryPeriod period(0.25, 0.5);
    TimeGrid time(16, 0.25, 2000, 6666, {0, 16});
    const SimGrid grid(std::move(time), WeightScheme::uniform(), period, QuadratureRule(8));
    MprSpec spec;
    spec.mode = MprSpec::Mode::constant_pi1;
    spec.pi1_value = 0.3;
    const auto a = martingale_check_stochvol(stochvol_model(std::nullopt), base_params(), spec, grid, 1);
    const auto b = martingale_check_stochvol(stochvol_model(std::nullopt), base_params(), spec, grid, 2);
    CHECK(a.estimate == b.estimate);
    CHECK(a.std_error == b.std_error);
}
