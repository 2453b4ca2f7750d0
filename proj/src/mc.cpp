#include "elswap/mc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace elswap {

ScenarioRun run_swap_scenario(const FuturesModel& model, const SimGrid& grid,
                              const ScenarioOptions& opts, const MpdpSeries* mpdp) {
    const long total = grid.time.n_paths;
    const long batch = std::max<long>(1, opts.batch_paths);
    const std::size_t n_cp = grid.time.checkpoints.size();

    if (opts.with_z && mpdp == nullptr)
        throw std::invalid_argument("run_swap_scenario: Z accumulation needs an MPDP series");

    ScenarioRun run;
    run.times = grid.time.checkpoint_times();
    run.n_paths = total;
    run.f_swap.resize(n_cp);
    run.f_appr.resize(n_cp);
    run.f_arith.resize(n_cp);
    run.d_factor.resize(n_cp);
    run.max_rel_f_fad_cp.assign(n_cp, 0.0);
    if (opts.with_z) {
        run.z_density.resize(n_cp);
        run.zf.resize(n_cp);
    }
    if (opts.track_f_nodes)
        run.f_node.assign(grid.n_nodes(), std::vector<RunningStat>(n_cp));
    run.min_d = std::numeric_limits<double>::infinity();
    run.max_d = -std::numeric_limits<double>::infinity();
    run.max_amgm_excess = -std::numeric_limits<double>::infinity();

    for (long first = 0; first < total; first += batch) {
        const long count = std::min(batch, total - first);
        const PathSet paths = simulate_paths(model, grid, first, count, opts.threads);
        const PathSeries f = swap_geometric(paths, grid);
        const PathSeries fa = swap_approximated(model, paths, grid);
        const PathSeries fA = swap_arithmetic(paths, grid);
        const PathSeries d = discount_factor_d(model, paths, grid);
        PathSeries z;
        if (opts.with_z)
            z = radon_nikodym_z(mpdp->pi1, mpdp->pi2, model, paths, grid);

        for (long p = 0; p < count; ++p) {
            for (std::size_t c = 0; c < n_cp; ++c) {
                const double vf = f.at(p, c);
                const double vfa = fa.at(p, c);
                const double vfA = fA.at(p, c);
                const double vd = d.at(p, c);
                run.f_swap[c].add(vf);
                run.f_appr[c].add(vfa);
                run.f_arith[c].add(vfA);
                run.d_factor[c].add(vd);
                if (opts.with_z) {
                    const double vz = z.at(p, c);
                    run.z_density[c].add(vz);
                    run.zf[c].add(vz * vf);
                }
                const double fad = vfa * vd;
                const double rel = std::abs(vf - fad) / std::max(std::abs(fad), 1e-300);
                run.max_rel_f_fad = std::max(run.max_rel_f_fad, rel);
                run.max_rel_f_fad_cp[c] = std::max(run.max_rel_f_fad_cp[c], rel);
                run.max_amgm_excess = std::max(run.max_amgm_excess, (vf - vfA) / vfA);
                run.min_d = std::min(run.min_d, vd);
                run.max_d = std::max(run.max_d, vd);
                if (opts.track_f_nodes)
                    for (int j = 0; j < grid.n_nodes(); ++j)
                        run.f_node[j][c].add(std::exp(paths.lnf(p, static_cast<int>(c), j)));
            }
        }
    }
    return run;
}

}  // namespace elswap
