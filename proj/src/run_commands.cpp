#include "elswap/run_commands.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "elswap/csv.hpp"
#include "elswap/harness.hpp"
#include "elswap/mc.hpp"
#include "elswap/mpdp.hpp"

namespace elswap {

namespace {

using nlohmann::json;

void write_summary(const std::filesystem::path& out_dir, const std::string& command,
                   const ScenarioConfig& cfg, const CommandOutcome& outcome, json extra) {
    json j;
    j["command"] = command;
    j["seed"] = cfg.seed;
    j["n_paths"] = cfg.n_paths;
    j["t_steps"] = cfg.t_steps;
    j["pass"] = outcome.ok;
    j["notes"] = outcome.notes;
    j["detail"] = std::move(extra);
    std::ofstream out(out_dir / "summary.json", std::ios::binary);
    out << j.dump(2) << "\n";
}

void note(CommandOutcome& o, const std::string& s) {
    o.notes.push_back(s);
    std::cout << s << "\n";
}

double rel_dev(double lhs, double rhs) {
    return std::abs(lhs - rhs) / std::max({std::abs(lhs), std::abs(rhs), 1.0});
}

std::string verdict(bool ok) { return ok ? "pass" : "FAIL"; }

}  // namespace

CommandOutcome cmd_mpdp(const ScenarioConfig& cfg, const std::filesystem::path& out_dir,
                        int threads) {
    (void)threads;
    std::filesystem::create_directories(out_dir);
    CommandOutcome outcome;
    const DeliveryPeriod period = build_period(cfg);
    const WeightScheme scheme = build_weight_scheme(cfg);
    const QuadratureRule quad = build_quadrature(cfg);
    const FuturesModel model_p = build_model(cfg, MeasureTag::physical);
    const SimGrid probe(TimeGrid(1, std::max(period.tau1, 1e-9), 1, cfg.seed, {0, 1}), scheme,
                        period, quad);
    const double lnf_state =
        cfg.lnf_state ? *cfg.lnf_state : std::log(initial_swap_geometric(model_p, probe));

    const int precision = output_precision(cfg.precision);
    CsvWriter csv(out_dir / "mpdp.csv",
                  {"t", "pi1_qqt", "pi2_qqt", "pi1_pq", "pi2_pq", "pi1_pqt", "pi2_pqt", "spread1",
                   "spread2"},
                  precision);

    const int rows = period.tau1 > 0.0 ? cfg.t_steps : 0;
    double max_dev = 0.0;
    for (int i = 0; i <= rows; ++i) {
        const double t = rows > 0 ? period.tau1 * i / rows : 0.0;
        const double pi1_qqt = mpdp_diffusion(model_p.sigma, scheme, period, t, quad);
        const double pi2_qqt =
            model_p.jumps ? mpdp_jump(model_p.jumps->eta, model_p.jumps->levy, scheme, period, t, quad)
                          : 0.0;
        const MarketPriceP pq = mpr_classical(model_p, lnf_state, t, scheme, period, quad);
        const MarketPriceP pqt = mpr_true(model_p, lnf_state, t, scheme, period, quad);
        const SpreadQQtilde sp = spread(model_p, t, scheme, period, quad);
        max_dev = std::max(max_dev, rel_dev(pqt.pi1, pq.pi1 + sp.pi1_bar));
        max_dev = std::max(max_dev, rel_dev(pqt.pi2, pq.pi2 + sp.pi2_bar));
        csv.row(std::vector<double>{t, pi1_qqt, pi2_qqt, pq.pi1, pq.pi2, pqt.pi1, pqt.pi2,
                                    sp.pi1_bar, sp.pi2_bar});
    }
    outcome.ok = max_dev <= 1e-12;
    note(outcome, "mpdp: decomposition identity row-wise max deviation = " +
                      CsvWriter::format(max_dev, 3) + " (tol 1e-12): " + verdict(outcome.ok));
    write_summary(out_dir, "mpdp", cfg, outcome, json{{"max_decomposition_dev", max_dev}});
    return outcome;
}

namespace {

struct MartingaleCsv {
    std::vector<std::array<std::string, 7>> rows;

    void add(const MartingaleReport& rep) {
        for (const auto& r : rep.rows)
            add_row(rep.target, r.t, rep.initial, r.mean, r.se, r.z, std::abs(r.z) <= 3.0);
    }
    void add_row(const std::string& target, double t, double ref, double mean, double se, double z,
                 bool ok) {
        rows.push_back({target, CsvWriter::format(t, 12), CsvWriter::format(ref, 12),
                        CsvWriter::format(mean, 12), CsvWriter::format(se, 12),
                        CsvWriter::format(z, 12), verdict(ok)});
    }
    void write(const std::filesystem::path& file, int precision) {
        CsvWriter csv(file, {"target", "t", "initial", "mean", "se", "z", "verdict"}, precision);
        for (const auto& r : rows)
            csv.row(r[0], std::span<const std::string>(r.data() + 1, 6));
    }
};

}  // namespace

CommandOutcome cmd_simulate(const ScenarioConfig& cfg, const std::filesystem::path& out_dir,
                            int threads) {
    std::filesystem::create_directories(out_dir);
    CommandOutcome outcome;
    const int precision = output_precision(cfg.precision);
    const SimGrid grid = build_sim_grid(cfg);
    const std::vector<double> times = grid.time.checkpoint_times();
    MartingaleCsv mart;
    bool all_pass = true;

    if (cfg.measure == "Qtilde") {
        const FuturesModel model = build_model(cfg, MeasureTag::artificial);
        const MpdpSeries mpdp = mpdp_series(model, grid);
        const PathSeries f = simulate_swap_qtilde(model, mpdp, grid, threads);
        const MartingaleReport rep = martingale_test("F", f, times);
        mart.add(rep);
        all_pass = rep.pass;
        note(outcome, "simulate (Qtilde): F martingale test: " + verdict(rep.pass));

        CsvWriter csv(out_dir / "swap_paths.csv",
                      {"t", "mean_F", "se_F", "mean_Fa", "se_Fa", "mean_FA", "se_FA", "mean_D",
                       "se_D", "mean_Z", "se_Z"},
                      precision);
        for (std::size_t c = 0; c < times.size(); ++c) {
            RunningStat st;
            for (long p = 0; p < f.n_paths; ++p)
                st.add(f.at(p, static_cast<int>(c)));
            std::vector<std::string> cells = {CsvWriter::format(st.mean(), precision),
                                              CsvWriter::format(st.se(), precision),
                                              "", "", "", "", "", "", "", ""};
            csv.row(CsvWriter::format(times[c], precision), cells);
        }
    } else {
        const bool physical = cfg.measure == "P";
        if (!physical && cfg.measure != "Q")
            throw std::invalid_argument("config: simulation.measure must be P, Q or Qtilde");
        const FuturesModel model =
            build_model(cfg, physical ? MeasureTag::physical : MeasureTag::artificial);

        // Density kernels: MPDP under Q; frozen-state true market price of
        // risk under P (any deterministic kernel gives a unit-mean density).
        MpdpSeries mpdp;
        bool with_z = true;
        std::string z_label;
        if (physical) {
            const WeightScheme scheme = build_weight_scheme(cfg);
            const QuadratureRule quad = build_quadrature(cfg);
            const double lnf_state =
                cfg.lnf_state ? *cfg.lnf_state : std::log(initial_swap_geometric(model, grid));
            mpdp.pi1.resize(grid.time.t_steps);
            mpdp.pi2.resize(grid.time.t_steps);
            for (int k = 0; k < grid.time.t_steps; ++k) {
                const MarketPriceP mp =
                    mpr_true(model, lnf_state, grid.time.time(k), scheme, grid.period, quad);
                mpdp.pi1[k] = mp.pi1;
                mpdp.pi2[k] = model.jumps ? mp.pi2 : 0.0;
                if (!(1.0 - mpdp.pi2[k] > 0.0))
                    with_z = false;
            }
            z_label = "Z_PQt(frozen state)";
            if (!with_z)
                note(outcome, "simulate (P): Z skipped, 1 - pi2 <= 0 somewhere on the grid");
        } else {
            mpdp = mpdp_series(model, grid);
            z_label = "Z_QQt";
        }

        ScenarioOptions opts;
        opts.batch_paths = cfg.batch_paths;
        opts.threads = threads;
        opts.with_z = with_z;
        const ScenarioRun run = run_swap_scenario(model, grid, opts, &mpdp);

        CsvWriter csv(out_dir / "swap_paths.csv",
                      {"t", "mean_F", "se_F", "mean_Fa", "se_Fa", "mean_FA", "se_FA", "mean_D",
                       "se_D", "mean_Z", "se_Z"},
                      precision);
        for (std::size_t c = 0; c < times.size(); ++c) {
            std::vector<std::string> cells = {
                CsvWriter::format(run.f_swap[c].mean(), precision),
                CsvWriter::format(run.f_swap[c].se(), precision),
                CsvWriter::format(run.f_appr[c].mean(), precision),
                CsvWriter::format(run.f_appr[c].se(), precision),
                CsvWriter::format(run.f_arith[c].mean(), precision),
                CsvWriter::format(run.f_arith[c].se(), precision),
                CsvWriter::format(run.d_factor[c].mean(), precision),
                CsvWriter::format(run.d_factor[c].se(), precision),
                with_z ? CsvWriter::format(run.z_density[c].mean(), precision) : "",
                with_z ? CsvWriter::format(run.z_density[c].se(), precision) : ""};
            csv.row(CsvWriter::format(times[c], precision), cells);
        }

        // Martingale targets: every futures node; F^a and Z under Q; Z under P.
        const double f0 = initial_swap_geometric(model, grid);
        for (int j = 0; j < grid.n_nodes(); ++j) {
            const MartingaleReport rep = martingale_from_stats(
                "f[u=" + CsvWriter::format(grid.nodes[j], 6) + "]", run.f_node[j], times);
            if (!physical) {
                mart.add(rep);
                all_pass = all_pass && rep.pass;
            }
        }
        if (!physical) {
            const MartingaleReport rep_fa = martingale_from_stats("Fa", run.f_appr, times);
            mart.add(rep_fa);
            all_pass = all_pass && rep_fa.pass;

            // F under Q drifts deterministically: compare against
            // F(0) e^{-integral} per checkpoint.
            const WeightScheme scheme = build_weight_scheme(cfg);
            const QuadratureRule quad = build_quadrature(cfg);
            bool drift_ok = true;
            for (std::size_t c = 1; c < times.size(); ++c) {
                const double ref =
                    f0 * std::exp(-swap_q_log_drift_integral(model, scheme, grid, times[c], quad));
                const double se = run.f_swap[c].se();
                const double z = se > 0.0 ? (run.f_swap[c].mean() - ref) / se
                                          : (run.f_swap[c].mean() == ref ? 0.0 : 1e9);
                mart.add_row("F_vs_drift", times[c], ref, run.f_swap[c].mean(), se, z,
                             std::abs(z) <= 3.0);
                drift_ok = drift_ok && std::abs(z) <= 3.0;
            }
            all_pass = all_pass && drift_ok;
            note(outcome, "simulate (Q): F drift vs closed form: " + verdict(drift_ok));
        }
        if (with_z) {
            const MartingaleReport rep_z = martingale_from_stats(z_label, run.z_density, times, 1.0);
            mart.add(rep_z);
            all_pass = all_pass && rep_z.pass;
        }

        const bool identity_ok = run.max_rel_f_fad <= 1e-10;
        const bool amgm_ok = run.max_amgm_excess <= 1e-12;
        all_pass = all_pass && identity_ok && amgm_ok;
        note(outcome, "simulate: pathwise F = Fa*D max rel dev = " +
                          CsvWriter::format(run.max_rel_f_fad, 3) + ": " + verdict(identity_ok));
        note(outcome, "simulate: pathwise F <= FA: " + verdict(amgm_ok));
    }

    mart.write(out_dir / "martingale_report.csv", precision);
    outcome.ok = all_pass;
    note(outcome, "simulate: martingale report: " + verdict(all_pass));
    write_summary(out_dir, "simulate", cfg, outcome, json{{"measure", cfg.measure}});
    return outcome;
}

CommandOutcome cmd_spread(const ScenarioConfig& cfg, const std::filesystem::path& out_dir,
                          int threads) {
    std::filesystem::create_directories(out_dir);
    CommandOutcome outcome;
    const int precision = output_precision(cfg.precision);
    const SimGrid grid = build_sim_grid(cfg);
    const bool physical = cfg.measure == "P";
    const FuturesModel model =
        build_model(cfg, physical ? MeasureTag::physical : MeasureTag::artificial);

    ScenarioOptions opts;
    opts.batch_paths = cfg.batch_paths;
    opts.threads = threads;
    opts.track_f_nodes = false;
    const ScenarioRun run = run_swap_scenario(model, grid, opts);

    const std::vector<double> times = grid.time.checkpoint_times();
    CsvWriter csv(out_dir / "spread.csv",
                  {"t", "mean_F", "mean_Fa", "mean_FA", "mean_D", "max_relerr_F_eq_Fa_times_D"},
                  precision);
    bool ordering_ok = true;
    for (std::size_t c = 0; c < times.size(); ++c) {
        csv.row(std::vector<double>{times[c], run.f_swap[c].mean(), run.f_appr[c].mean(),
                                    run.f_arith[c].mean(), run.d_factor[c].mean(),
                                    run.max_rel_f_fad_cp[c]});
        ordering_ok = ordering_ok && run.f_swap[c].mean() <= run.f_arith[c].mean() * (1.0 + 1e-12);
    }
    const bool identity_ok = run.max_rel_f_fad <= 1e-10;
    const bool d_ok =
        !model.jumps || model.jumps->eta.delivery_independent()
            ? (run.min_d > 0.0 && run.max_d <= 1.0)
            : run.min_d > 0.0;
    outcome.ok = identity_ok && ordering_ok && d_ok && run.max_amgm_excess <= 1e-12;
    note(outcome, "spread: max rel |F - Fa*D| = " + CsvWriter::format(run.max_rel_f_fad, 3) +
                      " (tol 1e-10): " + verdict(identity_ok));
    note(outcome, "spread: mean_F <= mean_FA row-wise: " + verdict(ordering_ok));
    note(outcome, "spread: D range [" + CsvWriter::format(run.min_d, 6) + ", " +
                      CsvWriter::format(run.max_d, 6) + "]: " + verdict(d_ok));
    write_summary(out_dir, "spread", cfg, outcome,
                  json{{"max_rel_f_fad", run.max_rel_f_fad},
                       {"min_D", run.min_d},
                       {"max_D", run.max_d}});
    return outcome;
}

CommandOutcome cmd_stochvol_check(const ScenarioConfig& cfg, const std::filesystem::path& out_dir,
                                  int threads) {
    std::filesystem::create_directories(out_dir);
    CommandOutcome outcome;
    const int precision = output_precision(cfg.precision);
    const CirParams params = build_cir(cfg);
    const FellerFlags feller = check_feller(params);
    const SimGrid grid = build_sim_grid(cfg);
    const FuturesModel model = build_model(cfg, MeasureTag::physical);

    CsvWriter csv(out_dir / "stochvol_report.csv",
                  {"item", "t", "value", "se", "reference", "z", "verdict"}, precision);
    auto row = [&](const std::string& item, double t, double value, double se, double ref, double z,
                   bool ok) {
        std::vector<std::string> cells = {CsvWriter::format(t, precision),
                                          CsvWriter::format(value, precision),
                                          CsvWriter::format(se, precision),
                                          CsvWriter::format(ref, precision),
                                          CsvWriter::format(z, precision), verdict(ok)};
        csv.row(item, cells);
    };

    row("feller_classical", 0, feller.classical, 0, 1, 0, true);
    row("feller_extended", 0, feller.extended, 0, 1, 0, true);
    if (!feller.extended)
        note(outcome,
             "stochvol-check: warning, extended Feller condition violated (sigma_nu^2 >= "
             "kappa_nu * theta_nu); inverse variance moments may diverge");

    // CIR mean against theta + (nu0 - theta) e^{-kappa t}.
    const CirPaths nu = simulate_cir(params, grid.time, threads);
    bool cir_ok = nu.min_value > 0.0;
    const std::vector<double> times = grid.time.checkpoint_times();
    for (std::size_t c = 1; c < times.size(); ++c) {
        RunningStat st;
        for (long p = 0; p < nu.n_paths; ++p)
            st.add(nu.at(p, static_cast<int>(c)));
        const double ref = cir_mean(params, times[c]);
        const double z = (st.mean() - ref) / st.se();
        const bool ok = std::abs(z) <= 3.0;
        cir_ok = cir_ok && ok;
        row("cir_mean", times[c], st.mean(), st.se(), ref, z, ok);
    }
    row("cir_positivity", times.back(), nu.min_value, 0, 0, 0, nu.min_value > 0.0);
    note(outcome, "stochvol-check: CIR exact-sampler mean/positivity: " + verdict(cir_ok));

    const McEstimate ez = martingale_check_stochvol(model, params, build_mpr_spec(cfg), grid, threads);
    const double z_ez = ez.std_error > 0.0 ? (ez.estimate - 1.0) / ez.std_error
                                           : (ez.estimate == 1.0 ? 0.0 : 1e9);
    const bool ez_ok = std::abs(z_ez) <= 3.0;
    row("E[Z_PQt]", grid.time.horizon, ez.estimate, ez.std_error, 1.0, z_ez, ez_ok);
    note(outcome, "stochvol-check: E[Z(tau1)] = " + CsvWriter::format(ez.estimate, 6) + " +- " +
                      CsvWriter::format(ez.std_error, 3) + ": " + verdict(ez_ok));

    outcome.ok = cir_ok && ez_ok;
    write_summary(out_dir, "stochvol-check", cfg, outcome,
                  json{{"feller_classical", feller.classical},
                       {"feller_extended", feller.extended},
                       {"E_Z", ez.estimate},
                       {"E_Z_se", ez.std_error}});
    return outcome;
}

}  // namespace elswap
