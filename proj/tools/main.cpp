#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "elswap/run_commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Electricity swap pricing and simulation engine"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::uint64_t seed_override = 0;
    bool seed_given = false;
    int threads = 0;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "scenario configuration file")->required();
        cmd->add_option("--out", out_dir, "output directory (default: config [output] directory)");
        cmd->add_option("--seed", seed_override, "seed override")
            ->each([&](const std::string&) { seed_given = true; });
        cmd->add_option("--threads", threads, "worker threads (0 = hardware)");
    };

    CLI::App* mpdp = app.add_subcommand("mpdp", "market price of delivery-period risk term structures");
    CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo swap simulation and martingale report");
    CLI::App* spread = app.add_subcommand("spread", "averaging spread between F, F^a and F^A");
    CLI::App* stochvol =
        app.add_subcommand("stochvol-check", "CIR stochastic volatility and E[Z] martingale check");
    for (CLI::App* cmd : {mpdp, simulate, spread, stochvol})
        add_common(cmd);

    CLI11_PARSE(app, argc, argv);

    try {
        elswap::ScenarioConfig cfg = elswap::load_scenario_config(config_path);
        if (seed_given)
            cfg.seed = seed_override;
        const std::filesystem::path out = out_dir.empty() ? cfg.directory : out_dir;

        elswap::CommandOutcome outcome;
        if (mpdp->parsed())
            outcome = elswap::cmd_mpdp(cfg, out, threads);
        else if (simulate->parsed())
            outcome = elswap::cmd_simulate(cfg, out, threads);
        else if (spread->parsed())
            outcome = elswap::cmd_spread(cfg, out, threads);
        else
            outcome = elswap::cmd_stochvol_check(cfg, out, threads);
        return outcome.ok ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
