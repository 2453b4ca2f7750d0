#pragma once

#include <optional>
#include <vector>

#include "elswap/dynamics.hpp"
#include "elswap/harness.hpp"

namespace elswap {

struct ScenarioOptions {
    long batch_paths = 8192;  // paths per streamed batch; results are batch-size invariant
    int threads = 0;          // 0 = hardware concurrency
    bool with_z = false;      // accumulate the Radon-Nikodym density (needs MPDP series)
    bool track_f_nodes = true;
};

/// Accumulated statistics of a streamed swap scenario. All reductions run
/// in ascending path order, so results are bit-identical for any batch
/// size and thread count.
struct ScenarioRun {
    std::vector<double> times;  // checkpoint times
    long n_paths = 0;

    std::vector<RunningStat> f_swap;   // F, geometric
    std::vector<RunningStat> f_appr;   // F^a, approximated
    std::vector<RunningStat> f_arith;  // F^A, arithmetic
    std::vector<RunningStat> d_factor;
    std::vector<RunningStat> z_density;
    std::vector<RunningStat> zf;                  // Z * F (pricing identity)
    std::vector<std::vector<RunningStat>> f_node;  // [node][checkpoint]

    // Pathwise trackers over all paths and checkpoints.
    std::vector<double> max_rel_f_fad_cp;  // per checkpoint
    double max_rel_f_fad = 0.0;            // |F - F^a D| / (F^a D)
    double max_amgm_excess = 0.0;          // max (F - F^A)/F^A, > 0 would break AM-GM
    double min_d = 0.0;
    double max_d = 0.0;
};

ScenarioRun run_swap_scenario(const FuturesModel& model, const SimGrid& grid,
                              const ScenarioOptions& opts,
                              const MpdpSeries* mpdp = nullptr);

}  // namespace elswap
