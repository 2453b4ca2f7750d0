#pragma once

#include <cstdint>
#include <vector>

#include "elswap/dynamics.hpp"
#include "elswap/model.hpp"

namespace elswap {

/// Cox-Ingersoll-Ross variance process
///   d nu = kappa_nu (theta_nu - nu) dt + sigma_nu sqrt(nu) dB,
/// correlated with the price Brownian motion through
/// B = rho W + sqrt(1 - rho^2) B-bar.
struct CirParams {
    double kappa_nu;  // mean-reversion speed, 1/years
    double theta_nu;  // long-run variance
    double sigma_nu;  // vol-of-vol
    double nu0;       // initial variance
    double rho;       // price-variance correlation, |rho| < 1
    double delta_nu;  // volatility risk premium coefficient

    CirParams(double kappa, double theta, double sigma, double nu_init, double correlation,
              double delta);
};

struct FellerFlags {
    bool classical;  // 2 kappa theta > sigma^2
    bool extended;   // sigma^2 < kappa theta (implies classical)
};

FellerFlags check_feller(const CirParams& params);

/// E[nu(t)] = theta + (nu0 - theta) e^{-kappa t}.
double cir_mean(const CirParams& params, double t);

struct CirPaths {
    long n_paths = 0;
    std::vector<int> checkpoints;
    std::vector<double> values;  // [path][checkpoint]
    double min_value = 0.0;      // over all paths and steps

    double at(long p, int cp) const { return values[static_cast<std::size_t>(p) * checkpoints.size() + cp]; }
};

/// Exact noncentral chi-square transition sampling of the CIR process:
/// strictly positive by construction, no discretization bias.
CirPaths simulate_cir(const CirParams& params, const TimeGrid& grid, int threads = 0);

struct McEstimate {
    double estimate;
    double std_error;
};

struct InverseMomentEstimate {
    double estimate;
    double std_error;
    bool feller_warning;  // extended Feller violated; the moment may diverge
};

/// MC estimate of E[nu^{-p}(t)], p in {1, 2}, via one exact transition to t.
InverseMomentEstimate inverse_moment_mc(const CirParams& params, double t, int p, long n_paths,
                                        std::uint64_t seed);

/// Market price of risk fed into the three-factor density Z^{P->Qtilde}.
/// The volatility component always follows the Heston-structure constraint
///   rho pi1 + sqrt(1 - rho^2) pi_nu = (delta_nu / sigma_nu) sqrt(nu).
struct MprSpec {
    enum class Mode {
        zero,          // pi1 = pi2 = pi_nu = 0 (Z identically 1)
        constant_pi1,  // fixed diffusion component
        true_mpr,      // state-dependent pi1, deterministic pi2
    };
    Mode mode = Mode::true_mpr;
    double pi1_value = 0.0;
};

/// Monte Carlo check that E[Z^{P->Qtilde}(tau1)] = 1 under CIR stochastic
/// volatility: ln F follows its physical dynamics with volatility
/// E[sigma(t,U)] sqrt(nu(t)); the density accumulates the diffusion, jump
/// and volatility kernels on the shared (W, B-bar, N) streams. The variance
/// path uses the positivity-preserving drift-implicit Milstein step, which
/// keeps nu > 0 whenever kappa theta > sigma_nu^2 / 4.
McEstimate martingale_check_stochvol(const FuturesModel& model_p, const CirParams& params,
                                     const MprSpec& mpr, const SimGrid& grid, int threads = 0);

}  // namespace elswap
