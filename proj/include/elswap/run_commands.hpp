#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "elswap/config.hpp"

namespace elswap {

struct CommandOutcome {
    bool ok = false;                 // all embedded self-checks passed
    std::vector<std::string> notes;  // human-readable findings, also echoed to stdout
};

/// Term structures of the MPDP, true/classical market prices of risk and the
/// decomposition spread over trading time; the decomposition identity is
/// re-checked row-wise before the file is accepted.
CommandOutcome cmd_mpdp(const ScenarioConfig& cfg, const std::filesystem::path& out_dir,
                        int threads);

/// Monte Carlo run under the configured measure with per-checkpoint means,
/// standard errors and the martingale report.
CommandOutcome cmd_simulate(const ScenarioConfig& cfg, const std::filesystem::path& out_dir,
                            int threads);

/// Averaging-spread comparison of F, F^a, F^A and D with the pathwise
/// identity F = F^a D checked per checkpoint.
CommandOutcome cmd_spread(const ScenarioConfig& cfg, const std::filesystem::path& out_dir,
                          int threads);

/// Feller flags, CIR mean check and the E[Z^{P->Qtilde}] estimate under
/// stochastic volatility.
CommandOutcome cmd_stochvol_check(const ScenarioConfig& cfg, const std::filesystem::path& out_dir,
                                  int threads);

}  // namespace elswap
