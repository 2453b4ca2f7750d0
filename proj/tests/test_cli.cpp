#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "elswap/csv.hpp"
#include "elswap/run_commands.hpp"

using namespace elswap;
namespace fs = std::filesystem;

namespace {

fs::path write_config(const std::string& name, const std::string& body) {
    const fs::path p = fs::temp_directory_path() / name;
    std::ofstream out(p);
    out << body;
    return p;
}

std::string read_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* kScenario = R"([delivery]
tau1 = 0.5
tau2 = 0.75

[volatility]
variant = seasonal
a = 0.3
b = 0.1
c = 0.15

[jump]
coefficient = piecewise
breakpoints = 0.625
levels = 0.25, 0.55
intensity = 3.0
size_dist = normal
mu_j = 0.08
sigma_j = 0.22

[drift]
mu0 = 4.08
kappa0 = 1.2

[initial]
f0 = 30.0

[simulation]
measure = Q
t_steps = 16
n_paths = 6000
seed = 20240
quad_order = 12
checkpoints = 3

[output]
directory = out
precision = 12
)";

const char* kStochvolScenario = R"([delivery]
tau1 = 0.25
tau2 = 0.5

[volatility]
variant = seasonal
a = 1.4
b = 0.5
c = 0.15

[jump]
coefficient = piecewise
breakpoints = 0.375
levels = 0.25, 0.55
intensity = 3.0
size_dist = normal
mu_j = 0.08
sigma_j = 0.22

[drift]
mu0 = 4.08
kappa0 = 1.2

[initial]
f0 = 30.0

[stochvol]
kappa_nu = 2.0
theta_nu = 0.04
sigma_nu = 0.25
nu0 = 0.05
rho = -0.4
delta_nu = 0.15
mpr = true

[simulation]
measure = P
t_steps = 24
n_paths = 12000
seed = 515
quad_order = 8
checkpoints = 4
)";

}  // namespace

TEST_CASE("cmd_mpdp emits the decomposition term structures") {
    const fs::path cfg_path = write_config("elswap_cli_mpdp.ini", kScenario);
    const ScenarioConfig cfg = load_scenario_config(cfg_path);
    const fs::path out = fs::temp_directory_path() / "elswap_out_mpdp";
    const CommandOutcome outcome = cmd_mpdp(cfg, out, 1);
    CHECK(outcome.ok);

    const CsvTable t = read_csv(out / "mpdp.csv");
    REQUIRE(t.header.size() == 9);
    CHECK(t.header[0] == "t");
    CHECK(t.header[1] == "pi1_qqt");
    REQUIRE(t.rows.size() == 17);  // t_steps + 1

    // re-parse and check the decomposition and sign claims row-wise
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const double pi1_qqt = t.num(r, t.col("pi1_qqt"));
        const double pi2_qqt = t.num(r, t.col("pi2_qqt"));
        CHECK(pi1_qqt <= 0.0);
        CHECK(pi2_qqt <= 0.0);
        for (int j = 1; j <= 2; ++j) {
            const double pqt = t.num(r, t.col("pi" + std::to_string(j) + "_pqt"));
            const double pq = t.num(r, t.col("pi" + std::to_string(j) + "_pq"));
            const double sp = t.num(r, t.col("spread" + std::to_string(j)));
            CHECK(std::abs(pqt - (pq + sp)) <= 1e-9 * std::max(1.0, std::abs(pqt)));
        }
        // spread1 equals the diffusion MPDP
        CHECK(t.num(r, t.col("spread1")) == doctest::Approx(pi1_qqt).epsilon(1e-9));
    }
}

TEST_CASE("cmd_mpdp: constant coefficients zero every column") {
    std::string flat = kScenario;
    const auto vol_pos = flat.find("variant = seasonal\na = 0.3\nb = 0.1\nc = 0.15");
    flat.replace(vol_pos, std::string("variant = seasonal\na = 0.3\nb = 0.1\nc = 0.15").size(),
                 "variant = constant\nsigma0 = 0.3");
    const auto eta_pos = flat.find("coefficient = piecewise\nbreakpoints = 0.625\nlevels = 0.25, 0.55");
    flat.replace(eta_pos,
                 std::string("coefficient = piecewise\nbreakpoints = 0.625\nlevels = 0.25, 0.55").size(),
                 "coefficient = constant\neta0 = 0.4");
    const fs::path cfg_path = write_config("elswap_cli_mpdp_flat.ini", flat);
    const ScenarioConfig cfg = load_scenario_config(cfg_path);
    const fs::path out = fs::temp_directory_path() / "elswap_out_mpdp_flat";
    CHECK(cmd_mpdp(cfg, out, 1).ok);
    const CsvTable t = read_csv(out / "mpdp.csv");
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        CHECK(t.num(r, t.col("pi1_qqt")) == 0.0);
        CHECK(t.num(r, t.col("pi2_qqt")) == 0.0);
        CHECK(t.num(r, t.col("spread1")) == 0.0);
        CHECK(t.num(r, t.col("spread2")) == 0.0);
    }
}

TEST_CASE("cmd_simulate under Q writes passing reports and is deterministic") {
    const fs::path cfg_path = write_config("elswap_cli_sim.ini", kScenario);
    const ScenarioConfig cfg = load_scenario_config(cfg_path);
    const fs::path out1 = fs::temp_directory_path() / "elswap_out_sim1";
    const fs::path out2 = fs::temp_directory_path() / "elswap_out_sim2";

    CHECK(cmd_simulate(cfg, out1, 1).ok);
    CHECK(cmd_simulate(cfg, out2, 2).ok);

    for (const char* name : {"swap_paths.csv", "martingale_report.csv"}) {
        CHECK(read_bytes(out1 / name) == read_bytes(out2 / name));
        CHECK(!read_bytes(out1 / name).empty());
    }

    const CsvTable t = read_csv(out1 / "swap_paths.csv");
    CHECK(t.header.size() == 11);
    // re-parse at configured precision
    const CsvTable rep = read_csv(out1 / "martingale_report.csv");
    bool has_fa = false, has_z = false, has_f_nodes = false, has_drift = false;
    for (std::size_t r = 0; r < rep.rows.size(); ++r) {
        CHECK(rep.cell(r, rep.col("verdict")) == "pass");
        const std::string& target = rep.cell(r, 0);
        has_fa = has_fa || target == "Fa";
        has_z = has_z || target == "Z_QQt";
        has_f_nodes = has_f_nodes || target.rfind("f[u=", 0) == 0;
        has_drift = has_drift || target == "F_vs_drift";
    }
    CHECK(has_fa);
    CHECK(has_z);
    CHECK(has_f_nodes);
    CHECK(has_drift);
}

TEST_CASE("cmd_simulate under Qtilde and P") {
    std::string qt = kScenario;
    qt.replace(qt.find("measure = Q"), std::string("measure = Q").size(), "measure = Qtilde");
    const fs::path p1 = write_config("elswap_cli_sim_qt.ini", qt);
    const fs::path out1 = fs::temp_directory_path() / "elswap_out_sim_qt";
    CHECK(cmd_simulate(load_scenario_config(p1), out1, 2).ok);

    std::string pm = kScenario;
    pm.replace(pm.find("measure = Q"), std::string("measure = Q").size(), "measure = P");
    const fs::path p2 = write_config("elswap_cli_sim_p.ini", pm);
    const fs::path out2 = fs::temp_directory_path() / "elswap_out_sim_p";
    CHECK(cmd_simulate(load_scenario_config(p2), out2, 2).ok);
}

TEST_CASE("cmd_spread emits the averaging comparison with the identity bound") {
    const fs::path cfg_path = write_config("elswap_cli_spread.ini", kScenario);
    const ScenarioConfig cfg = load_scenario_config(cfg_path);
    const fs::path out = fs::temp_directory_path() / "elswap_out_spread";
    CHECK(cmd_spread(cfg, out, 2).ok);

    const CsvTable t = read_csv(out / "spread.csv");
    REQUIRE(t.header.size() == 6);
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        CHECK(t.num(r, t.col("mean_F")) <= t.num(r, t.col("mean_FA")) * (1.0 + 1e-12));
        CHECK(t.num(r, t.col("max_relerr_F_eq_Fa_times_D")) < 1e-10);
    }
}

TEST_CASE("cmd_spread: delivery-independent eta pins D at one") {
    std::string flat = kScenario;
    const auto eta_pos = flat.find("coefficient = piecewise\nbreakpoints = 0.625\nlevels = 0.25, 0.55");
    flat.replace(eta_pos,
                 std::string("coefficient = piecewise\nbreakpoints = 0.625\nlevels = 0.25, 0.55").size(),
                 "coefficient = constant\neta0 = 0.4");
    const fs::path cfg_path = write_config("elswap_cli_spread_flat.ini", flat);
    const fs::path out = fs::temp_directory_path() / "elswap_out_spread_flat";
    CHECK(cmd_spread(load_scenario_config(cfg_path), out, 2).ok);
    const CsvTable t = read_csv(out / "spread.csv");
    for (std::size_t r = 0; r < t.rows.size(); ++r)
        CHECK(t.num(r, t.col("mean_D")) <= 1.0);
}

TEST_CASE("cmd_stochvol_check passes the Feller, CIR and E[Z] gates") {
    const fs::path cfg_path = write_config("elswap_cli_sv.ini", kStochvolScenario);
    const ScenarioConfig cfg = load_scenario_config(cfg_path);
    const fs::path out = fs::temp_directory_path() / "elswap_out_sv";
    const CommandOutcome outcome = cmd_stochvol_check(cfg, out, 2);
    CHECK(outcome.ok);

    const CsvTable t = read_csv(out / "stochvol_report.csv");
    bool saw_ez = false;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        if (t.cell(r, 0) == "E[Z_PQt]") {
            saw_ez = true;
            CHECK(std::abs(t.num(r, t.col("value")) - 1.0) <= 3.0 * t.num(r, t.col("se")));
        }
        CHECK(t.cell(r, t.col("verdict")) == "pass");
    }
    CHECK(saw_ez);
}

TEST_CASE("cmd_stochvol_check warns on a Feller violation but proceeds") {
    std::string bad = kStochvolScenario;
    bad.replace(bad.find("sigma_nu = 0.25"), std::string("sigma_nu = 0.25").size(),
                "sigma_nu = 0.30");  // 0.09 > kappa theta = 0.08
    const fs::path cfg_path = write_config("elswap_cli_sv_warn.ini", bad);
    const fs::path out = fs::temp_directory_path() / "elswap_out_sv_warn";
    const CommandOutcome outcome = cmd_stochvol_check(load_scenario_config(cfg_path), out, 2);
    bool warned = false;
    for (const auto& n : outcome.notes)
        warned = warned || n.find("warning") != std::string::npos;
    CHECK(warned);
}
