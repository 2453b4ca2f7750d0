#include "elswap/stochvol.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "elswap/rng.hpp"

namespace elswap {

CirParams::CirParams(double kappa, double theta, double sigma, double nu_init, double correlation,
                     double delta)
    : kappa_nu(kappa), theta_nu(theta), sigma_nu(sigma), nu0(nu_init), rho(correlation),
      delta_nu(delta) {
    if (!(kappa > 0.0) || !(theta > 0.0) || !(sigma > 0.0) || !(nu_init > 0.0))
        throw std::domain_error("CIR: kappa_nu, theta_nu, sigma_nu, nu0 must be > 0");
    if (!(std::abs(correlation) < 1.0 - 1e-9))
        throw std::domain_error("CIR: |rho| must be < 1 (the volatility kernel divides by sqrt(1-rho^2))");
    if (!std::isfinite(delta))
        throw std::domain_error("CIR: delta_nu must be finite");
}

FellerFlags check_feller(const CirParams& p) {
    return FellerFlags{2.0 * p.kappa_nu * p.theta_nu > p.sigma_nu * p.sigma_nu,
                       p.sigma_nu * p.sigma_nu < p.kappa_nu * p.theta_nu};
}

double cir_mean(const CirParams& p, double t) {
    return p.theta_nu + (p.nu0 - p.theta_nu) * std::exp(-p.kappa_nu * t);
}

namespace {

void run_parallel(long n, int threads, const std::function<void(long, long)>& body) {
    int nt = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    nt = static_cast<int>(std::max<long>(1, std::min<long>(nt, n)));
    if (nt == 1) {
        body(0, n);
        return;
    }
    std::vector<std::thread> pool;
    const long chunk = (n + nt - 1) / nt;
    for (int i = 0; i < nt; ++i) {
        const long lo = i * chunk;
        const long hi = std::min(n, lo + chunk);
        if (lo >= hi)
            break;
        pool.emplace_back(body, lo, hi);
    }
    for (auto& t : pool)
        t.join();
}

/// One exact CIR transition over dt: nu' = c * chi'^2(d, lambda_nc) with
/// d = 4 kappa theta / sigma^2 > 1, sampled as chi^2_{d-1} + (Z + sqrt(l))^2.
double cir_exact_step(const CirParams& p, double nu, double dt, const PathRng& rng,
                      std::uint32_t step) {
    const double e = std::exp(-p.kappa_nu * dt);
    const double c = p.sigma_nu * p.sigma_nu * (1.0 - e) / (4.0 * p.kappa_nu);
    const double d = 4.0 * p.kappa_nu * p.theta_nu / (p.sigma_nu * p.sigma_nu);
    const double lambda_nc = nu * e / c;
    const double z = rng.normal(step, Stream::cir_normal, 0);
    const double chi = 2.0 * rng.gamma(0.5 * (d - 1.0), step, Stream::cir_gamma);
    const double s = z + std::sqrt(lambda_nc);
    return c * (chi + s * s);
}

}  // namespace

CirPaths simulate_cir(const CirParams& params, const TimeGrid& grid, int threads) {
    const double d = 4.0 * params.kappa_nu * params.theta_nu / (params.sigma_nu * params.sigma_nu);
    if (!(d > 1.0))
        throw std::domain_error("simulate_cir: 4 kappa theta / sigma^2 must exceed 1 for the chi-square split");

    CirPaths out;
    out.n_paths = grid.n_paths;
    out.checkpoints = grid.checkpoints;
    out.values.resize(static_cast<std::size_t>(grid.n_paths) * grid.checkpoints.size());
    const double dt = grid.dt();

    std::vector<double> mins(grid.n_paths, params.nu0);
    run_parallel(grid.n_paths, threads, [&](long lo, long hi) {
        for (long p = lo; p < hi; ++p) {
            const PathRng rng(grid.seed, static_cast<std::uint64_t>(p));
            double nu = params.nu0;
            double mn = nu;
            std::size_t cp = 0;
            if (grid.checkpoints[0] == 0) {
                out.values[p * grid.checkpoints.size()] = nu;
                cp = 1;
            }
            for (int k = 0; k < grid.t_steps; ++k) {
                nu = cir_exact_step(params, nu, dt, rng, static_cast<std::uint32_t>(k));
                mn = std::min(mn, nu);
                if (cp < grid.checkpoints.size() && grid.checkpoints[cp] == k + 1) {
                    out.values[p * grid.checkpoints.size() + cp] = nu;
                    ++cp;
                }
            }
            mins[p] = mn;
        }
    });
    out.min_value = *std::min_element(mins.begin(), mins.end());
    return out;
}

InverseMomentEstimate inverse_moment_mc(const CirParams& params, double t, int p, long n_paths,
                                        std::uint64_t seed) {
    if (p != 1 && p != 2)
        throw std::domain_error("inverse_moment_mc: p must be 1 or 2");
    if (!(t > 0.0) || n_paths < 2)
        throw std::domain_error("inverse_moment_mc: need t > 0 and n_paths >= 2");
    const bool warn = !check_feller(params).extended;

    double sum = 0.0, sumsq = 0.0;
    for (long i = 0; i < n_paths; ++i) {
        const PathRng rng(seed, static_cast<std::uint64_t>(i));
        const double nu = cir_exact_step(params, params.nu0, t, rng, 0);
        const double v = p == 1 ? 1.0 / nu : 1.0 / (nu * nu);
        sum += v;
        sumsq += v * v;
    }
    const double mean = sum / n_paths;
    const double var = std::max(0.0, (sumsq - n_paths * mean * mean) / (n_paths - 1));
    return InverseMomentEstimate{mean, std::sqrt(var / n_paths), warn};
}

McEstimate martingale_check_stochvol(const FuturesModel& model_p, const CirParams& params,
                                     const MprSpec& mpr, const SimGrid& grid, int threads) {
    if (model_p.measure != MeasureTag::physical)
        throw std::invalid_argument("martingale_check_stochvol: a physical-measure model is required");
    const SwapStepCoefficients co = swap_step_coefficients(model_p, grid);
    const int K = grid.time.t_steps;
    const double dt = grid.time.dt();
    const double sqdt = std::sqrt(dt);
    const double root = std::sqrt(1.0 - params.rho * params.rho);

    // Deterministic market price of jump risk (true flavor): the measure
    // change scales the jump intensity by 1 - pi2 and leaves G untouched.
    std::vector<double> pi2(K, 0.0);
    if (co.has_jumps && mpr.mode != MprSpec::Mode::zero) {
        for (int k = 0; k < K; ++k) {
            const double den = co.m_of_e[k] - 1.0;
            if (std::abs(den) < 1e-12)
                throw std::runtime_error("martingale_check_stochvol: degenerate M(E[eta]) - 1");
            pi2[k] = 1.0 - co.m1 * co.e_eta[k] / den;
        }
    }

    const double ln_f0 = std::log(initial_swap_geometric(model_p, grid));
    const long n = grid.time.n_paths;
    std::vector<double> z_final(n);

    std::vector<int> fail_step(n, -1);
    run_parallel(n, threads, [&](long lo, long hi) {
        for (long p = lo; p < hi; ++p) {
            const PathRng rng(grid.time.seed, static_cast<std::uint64_t>(p));
            double nu = params.nu0;
            double ln_f = ln_f0;
            double ln_z = 0.0;
            for (int k = 0; k < K; ++k) {
                const std::uint32_t ks = static_cast<std::uint32_t>(k);
                const double dw = sqdt * rng.normal(ks, Stream::diffusion, 0);
                const double dbbar = sqdt * rng.normal(ks, Stream::vol_brownian, 0);
                const double db = params.rho * dw + root * dbbar;
                const double sqnu = std::sqrt(nu);

                double pi1 = 0.0, pinu = 0.0;
                switch (mpr.mode) {
                    case MprSpec::Mode::zero:
                        break;
                    case MprSpec::Mode::constant_pi1:
                        pi1 = mpr.pi1_value;
                        break;
                    case MprSpec::Mode::true_mpr:
                        pi1 = ((co.e_mu.empty() ? 0.0 : co.e_mu[k]) -
                               model_p.drift->kappa(grid.time.time(k)) * ln_f +
                               0.5 * nu * co.e_sigma[k] * co.e_sigma[k]) /
                              (co.e_sigma[k] * sqnu);
                        break;
                }
                if (mpr.mode != MprSpec::Mode::zero)
                    pinu = ((params.delta_nu / params.sigma_nu) * sqnu - params.rho * pi1) / root;

                ln_z += -pi1 * dw - pinu * dbbar - 0.5 * (pi1 * pi1 + pinu * pinu) * dt;

                double sumz = 0.0;
                if (co.has_jumps) {
                    const int nj = rng.poisson(co.lambda * dt, ks, Stream::jump_count);
                    for (int i = 0; i < nj; ++i) {
                        const double z = model_p.jumps->levy.dist.sample(rng, ks, Stream::jump_size,
                                                                         static_cast<std::uint32_t>(i));
                        sumz += z;
                        const double factor = 1.0 - pi2[k] * z;
                        if (!(factor > 0.0)) {
                            fail_step[p] = k;
                            break;
                        }
                        ln_z += std::log(factor);
                    }
                    if (fail_step[p] >= 0)
                        break;
                    ln_z += co.lambda * co.m1 * pi2[k] * dt;
                }

                ln_f = co.decay[k] * ln_f + (co.e_mu.empty() ? 0.0 : co.e_mu[k]) * dt +
                       co.e_sigma[k] * sqnu * dw;
                if (co.has_jumps)
                    ln_f += co.e_eta[k] * (sumz - co.lambda * co.m1 * dt);

                // Drift-implicit Milstein: strictly positive under the
                // extended Feller condition.
                const double half = sqnu + 0.5 * params.sigma_nu * db;
                nu = (half * half + (params.kappa_nu * params.theta_nu -
                                     0.25 * params.sigma_nu * params.sigma_nu) *
                                        dt) /
                     (1.0 + params.kappa_nu * dt);
            }
            z_final[p] = std::exp(ln_z);
        }
    });

    for (long p = 0; p < n; ++p)
        if (fail_step[p] >= 0)
            throw std::runtime_error(
                "martingale_check_stochvol: jump density factor 1 - pi2 z <= 0 at step " +
                std::to_string(fail_step[p]) + " (path " + std::to_string(p) + ")");

    double sum = 0.0, sumsq = 0.0;
    for (long p = 0; p < n; ++p) {
        sum += z_final[p];
        sumsq += z_final[p] * z_final[p];
    }
    const double mean = sum / n;
    const double var = std::max(0.0, (sumsq - n * mean * mean) / (n - 1));
    return McEstimate{mean, std::sqrt(var / n)};
}

}  // namespace elswap
