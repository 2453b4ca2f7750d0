#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "elswap/model.hpp"
#include "elswap/stochvol.hpp"

namespace elswap {

/// Declarative scenario description parsed from an INI-style text file:
/// [section] headers, key = value lines, '#' comments, comma-separated
/// numeric lists. Unknown sections or keys are hard errors.
struct ScenarioConfig {
    // [delivery]
    double tau1 = 0.0;
    double tau2 = 0.0;
    std::string scheme = "uniform";  // uniform | discounted | tabulated
    double rate = 0.0;
    std::vector<double> knots_u, knots_w;

    // [volatility]
    std::string vol_variant;  // constant | seasonal | samuelson | tabulated
    double sigma0 = 0.0;
    double a = 0.0, b = 0.0, c = 0.0;
    double lambda_bar = 0.0, damping = 0.0;
    std::vector<double> vol_t_grid, vol_u_grid, vol_values;

    // [jump] (optional)
    bool has_jump = false;
    std::string jump_coefficient = "constant";  // constant | piecewise | tabulated
    double eta0 = 0.0;
    std::vector<double> eta_breaks, eta_levels;
    std::vector<double> eta_t_grid, eta_u_grid, eta_values;
    double intensity = 0.0;
    std::string size_dist;  // normal | exponential | lognormal (rejected)
    double mu_j = 0.0, sigma_j = 0.0, lambda_j = 0.0;

    // [drift] (optional; required for physical-measure runs)
    bool has_drift = false;
    std::string mu_variant = "constant";
    double mu0 = 0.0;
    std::vector<double> mu_t_grid, mu_u_grid, mu_values;
    std::string kappa_variant = "constant";
    double kappa0 = 0.0;
    std::vector<double> kappa_t_grid, kappa_values;

    // [initial] (optional; constant 1.0 when absent)
    std::string initial_variant = "constant";
    double f0 = 1.0;
    std::vector<double> f0_taus, f0_values;

    // [stochvol] (optional)
    bool has_stochvol = false;
    double kappa_nu = 0.0, theta_nu = 0.0, sigma_nu = 0.0, nu0 = 0.0, rho = 0.0, delta_nu = 0.0;
    std::string mpr_mode = "true";  // zero | constant_pi1 | true
    double pi1_value = 0.0;

    // [simulation]
    std::string measure = "Q";  // P | Q | Qtilde
    int t_steps = 64;
    long n_paths = 10000;
    std::uint64_t seed = 42;
    int quad_order = 64;
    int checkpoints = 9;
    long batch_paths = 8192;
    std::optional<double> lnf_state;  // market-price-of-risk reporting state

    // [output]
    std::string directory = "out";
    int precision = 12;
};

ScenarioConfig load_scenario_config(const std::filesystem::path& file);

// Constructors from a validated config; each rejects with the failing
// constraint named by its field path.
WeightScheme build_weight_scheme(const ScenarioConfig& cfg);
DeliveryPeriod build_period(const ScenarioConfig& cfg);
QuadratureRule build_quadrature(const ScenarioConfig& cfg);
VolatilityCurve build_volatility(const ScenarioConfig& cfg);
std::optional<JumpSpec> build_jumps(const ScenarioConfig& cfg, MeasureTag tag);
InitialCurve build_initial_curve(const ScenarioConfig& cfg);
FuturesModel build_model(const ScenarioConfig& cfg, MeasureTag measure);
CirParams build_cir(const ScenarioConfig& cfg);
MprSpec build_mpr_spec(const ScenarioConfig& cfg);
SimGrid build_sim_grid(const ScenarioConfig& cfg);

}  // namespace elswap
