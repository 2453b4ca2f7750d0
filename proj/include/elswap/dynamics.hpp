#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "elswap/model.hpp"
#include "elswap/mpdp.hpp"

namespace elswap {

/// Jump event shared across all delivery nodes and every derived process:
/// the model has a single Poisson random measure driving the whole curve.
struct JumpMark {
    std::int32_t step;  // left-point step index, time = step * dt
    double size;        // z drawn from G
};

/// Simulated log futures curve. ln f is recorded at the grid checkpoints;
/// the Brownian increments and jump marks carry the complete streams, so
/// the approximated swap, the averaging spread D, and the Radon-Nikodym
/// densities can be accumulated step by step from the same randomness.
struct PathSet {
    long first_path = 0;
    long n_paths = 0;
    int n_steps = 0;
    int n_nodes = 0;
    std::vector<int> checkpoints;
    std::vector<double> ln_f;  // [path][checkpoint][node]
    std::vector<double> dw;    // [path][step]
    std::vector<std::vector<JumpMark>> marks;  // per path, ascending step

    double lnf(long p, int cp, int node) const {
        return ln_f[(static_cast<std::size_t>(p) * checkpoints.size() + cp) * n_nodes + node];
    }
    double dW(long p, int step) const { return dw[static_cast<std::size_t>(p) * n_steps + step]; }
};

/// Per-path scalar series recorded at the grid checkpoints.
struct PathSeries {
    long n_paths = 0;
    std::vector<int> checkpoints;
    std::vector<double> values;  // [path][checkpoint]

    double at(long p, int cp) const { return values[static_cast<std::size_t>(p) * checkpoints.size() + cp]; }
    double& at(long p, int cp) { return values[static_cast<std::size_t>(p) * checkpoints.size() + cp]; }
    int n_cp() const { return static_cast<int>(checkpoints.size()); }
};

/// Simulate ln f(t, u) on the grid for paths [first_path, first_path + count).
///
/// Under Q each step applies the exact log-return update
///   d ln f = sigma dW + eta dJ~ - (sigma^2/2 + psi(eta)) dt,
/// which keeps every delivery node an exact per-step martingale. Under P the
/// Ornstein-Uhlenbeck decay e^{-int kappa} is applied exactly per step and the
/// mu, sigma, eta terms are taken at the left point.
PathSet simulate_paths(const FuturesModel& model, const SimGrid& grid, long first_path, long count,
                       int threads = 0);
PathSet simulate_paths(const FuturesModel& model, const SimGrid& grid, int threads = 0);

/// F(t) = exp(sum_j w_j ln f(t, u_j)) — geometric averaging.
PathSeries swap_geometric(const PathSet& paths, const SimGrid& grid);

/// F^A(t) = sum_j w_j f(t, u_j) — arithmetic averaging.
PathSeries swap_arithmetic(const PathSet& paths, const SimGrid& grid);

/// F^a(t) — approximated averaging, built by exponentiating the X-bar^a
/// recursion on the shared streams: diffusion term E[sigma] dW, jump term
/// ln E_U[e^{eta z}] per mark, and under Q the drift
/// -(E[sigma]^2/2 + lambda (E_U[M(eta)] - 1)) dt. Under P the OU decay acts
/// on the full log swap state per the approximated-averaging dynamics.
PathSeries swap_approximated(const FuturesModel& model, const PathSet& paths, const SimGrid& grid);

/// Averaging spread factor D with F = F^a D pathwise:
///   ln D(t) = -1/2 int_0^t V[sigma(s,U)] ds
///             - sum_{marks (s,z), s<=t} (ln E_U[e^{eta(s,U) z}] - E_U[eta(s,U)] z).
/// Depends only on the jump marks and deterministic curves, hence is
/// unchanged by measure changes.
PathSeries discount_factor_d(const FuturesModel& model, const PathSet& paths, const SimGrid& grid);

/// Radon-Nikodym density Z = Z1 Z2 on the path's own increments and marks:
///   Z1 = exp(-int pi1 dW - 1/2 int pi1^2 ds),
///   Z2 = exp(sum ln(1 - pi2) + lambda int pi2 ds).
/// pi1/pi2 are per-step series evaluated at the left points; requires
/// 1 - pi2 > 0 throughout.
PathSeries radon_nikodym_z(std::span<const double> pi1, std::span<const double> pi2,
                           const FuturesModel& model, const PathSet& paths, const SimGrid& grid);

/// MPDP series (pi1[k], pi2[k]) at the left points of the grid steps,
/// computed on the grid's own delivery discretization.
struct MpdpSeries {
    std::vector<double> pi1;
    std::vector<double> pi2;
};
MpdpSeries mpdp_series(const FuturesModel& model_q, const SimGrid& grid);

/// Simulate the swap price directly under Q-tilde: diffusion coefficient
/// E[sigma(t,U)], jump factor e^{E[eta(t,U)] z} - 1, Poisson intensity
/// lambda (1 - pi2(t)), and the exact compensator keeping F a martingale.
PathSeries simulate_swap_qtilde(const FuturesModel& model_q, const MpdpSeries& mpdp,
                                const SimGrid& grid, long first_path, long count, int threads = 0);
PathSeries simulate_swap_qtilde(const FuturesModel& model_q, const MpdpSeries& mpdp,
                                const SimGrid& grid, int threads = 0);

/// Swap simulation for the delivery-dependent-intensity variant: constant
/// jump coefficient eta, intensity lambda_eff = E[lambda(U)] under Q-tilde.
PathSeries simulate_swap_effective_intensity(const VolatilityCurve& sigma, double eta,
                                             const JumpSizeDistribution& dist, double intensity,
                                             double swap_f0, const SimGrid& grid, int threads = 0);

/// E[lambda(U)] of a delivery-dependent jump intensity.
double effective_intensity(const std::function<double(double)>& lambda_of_u,
                           const WeightScheme& scheme, const DeliveryPeriod& period,
                           const QuadratureRule& quad);

/// Deterministic log-drift of F under Q (Lemma "swap under Q"):
///   integral over [0, t] of  V[sigma(s,U)]/2 + E[psi(eta(s,U))] - psi(E[eta(s,U)]),
/// by composite Gauss-Legendre. E[F(t)] = F(0) e^{-value} in continuous time.
double swap_q_log_drift_integral(const FuturesModel& model_q, const WeightScheme& scheme,
                                 const SimGrid& grid, double t, const QuadratureRule& quad,
                                 int sub_order = 8);

/// Same integral evaluated as the scheme's left-point Riemann sum over the
/// first `upto_step` steps: the exact discrete-scheme mean of F after that
/// many steps is F(0) e^{-value}.
double swap_q_log_drift_riemann(const FuturesModel& model_q, const SimGrid& grid, int upto_step);

/// Initial swap price F(0) = exp(sum_j w_j ln f(0, u_j)).
double initial_swap_geometric(const FuturesModel& model, const SimGrid& grid);
/// Initial arithmetic average F^A(0) = sum_j w_j f(0, u_j).
double initial_swap_arithmetic(const FuturesModel& model, const SimGrid& grid);

/// Deterministic per-step delivery averages of the model curves at the grid
/// left points, on the grid's own nodes and weights.
struct SwapStepCoefficients {
    std::vector<double> e_sigma;   // E[sigma(t_k, U)]
    std::vector<double> e_sigma2;  // E[sigma^2(t_k, U)]
    std::vector<double> v_sigma;   // V[sigma(t_k, U)]
    std::vector<double> e_eta;     // E[eta(t_k, U)] (empty without jumps)
    std::vector<double> eu_m;      // E_U[M(eta(t_k, U))]
    std::vector<double> m_of_e;    // M(E_U[eta(t_k, U)])
    std::vector<double> e_mu;      // E[mu(t_k, U)] (P only)
    std::vector<double> decay;     // e^{-int kappa} per step (1 under Q)
    bool has_jumps = false;
    double lambda = 0.0;
    double m1 = 0.0;
};
SwapStepCoefficients swap_step_coefficients(const FuturesModel& model, const SimGrid& grid);

}  // namespace elswap
