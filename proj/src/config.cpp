#include "elswap/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace elswap {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b])))
        ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])))
        --e;
    return s.substr(b, e - b);
}

struct RawConfig {
    // section -> key -> (value, line number)
    std::map<std::string, std::map<std::string, std::pair<std::string, int>>> kv;
    std::set<std::string> consumed;  // "section.key"

    bool has(const std::string& sec) const { return kv.count(sec) > 0; }

    const std::pair<std::string, int>* find(const std::string& sec, const std::string& key) {
        auto s = kv.find(sec);
        if (s == kv.end())
            return nullptr;
        auto k = s->second.find(key);
        if (k == s->second.end())
            return nullptr;
        consumed.insert(sec + "." + key);
        return &k->second;
    }

    std::string str(const std::string& sec, const std::string& key, const std::string& fallback) {
        const auto* v = find(sec, key);
        return v ? v->first : fallback;
    }

    double num(const std::string& sec, const std::string& key, double fallback,
               bool* present = nullptr) {
        const auto* v = find(sec, key);
        if (present)
            *present = v != nullptr;
        if (!v)
            return fallback;
        std::size_t pos = 0;
        const double x = std::stod(v->first, &pos);
        if (pos != v->first.size())
            throw std::invalid_argument("config: " + sec + "." + key + " is not a number (line " +
                                        std::to_string(v->second) + ")");
        return x;
    }

    std::vector<double> list(const std::string& sec, const std::string& key) {
        const auto* v = find(sec, key);
        std::vector<double> out;
        if (!v)
            return out;
        std::stringstream ss(v->first);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            cell = trim(cell);
            if (cell.empty())
                continue;
            out.push_back(std::stod(cell));
        }
        return out;
    }

    void check_consumed() const {
        for (const auto& [sec, keys] : kv)
            for (const auto& [key, val] : keys)
                if (!consumed.count(sec + "." + key))
                    throw std::invalid_argument("config: unknown key '" + sec + "." + key +
                                                "' (line " + std::to_string(val.second) + ")");
    }
};

RawConfig parse_ini(const std::filesystem::path& file) {
    static const std::set<std::string> known_sections = {
        "delivery", "volatility", "jump", "drift", "initial", "stochvol", "simulation", "output"};
    std::ifstream in(file);
    if (!in)
        throw std::runtime_error("config: cannot open " + file.string());
    RawConfig raw;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::invalid_argument("config: malformed section header at line " +
                                            std::to_string(lineno));
            section = trim(line.substr(1, line.size() - 2));
            if (!known_sections.count(section))
                throw std::invalid_argument("config: unknown section '[" + section + "]' (line " +
                                            std::to_string(lineno) + ")");
            raw.kv[section];
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos || section.empty())
            throw std::invalid_argument("config: expected 'key = value' at line " +
                                        std::to_string(lineno));
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw std::invalid_argument("config: empty key or value at line " + std::to_string(lineno));
        if (raw.kv[section].count(key))
            throw std::invalid_argument("config: duplicate key '" + section + "." + key + "' (line " +
                                        std::to_string(lineno) + ")");
        raw.kv[section][key] = {value, lineno};
    }
    return raw;
}

[[noreturn]] void fail(const std::string& field, const std::string& why) {
    throw std::invalid_argument("config: " + field + ": " + why);
}

}  // namespace

ScenarioConfig load_scenario_config(const std::filesystem::path& file) {
    RawConfig raw = parse_ini(file);
    ScenarioConfig cfg;

    if (!raw.has("delivery"))
        fail("delivery", "section is required");
    bool p1 = false, p2 = false;
    cfg.tau1 = raw.num("delivery", "tau1", 0.0, &p1);
    cfg.tau2 = raw.num("delivery", "tau2", 0.0, &p2);
    if (!p1 || !p2)
        fail("delivery.tau1/tau2", "both are required");
    cfg.scheme = raw.str("delivery", "scheme", "uniform");
    cfg.rate = raw.num("delivery", "rate", 0.0);
    cfg.knots_u = raw.list("delivery", "knots_u");
    cfg.knots_w = raw.list("delivery", "knots_w");

    if (!raw.has("volatility"))
        fail("volatility", "section is required");
    cfg.vol_variant = raw.str("volatility", "variant", "");
    if (cfg.vol_variant.empty())
        fail("volatility.variant", "required (constant | seasonal | samuelson | tabulated)");
    cfg.sigma0 = raw.num("volatility", "sigma0", 0.0);
    cfg.a = raw.num("volatility", "a", 0.0);
    cfg.b = raw.num("volatility", "b", 0.0);
    cfg.c = raw.num("volatility", "c", 0.0);
    cfg.lambda_bar = raw.num("volatility", "lambda_bar", 0.0);
    cfg.damping = raw.num("volatility", "damping", 0.0);
    cfg.vol_t_grid = raw.list("volatility", "t_grid");
    cfg.vol_u_grid = raw.list("volatility", "u_grid");
    cfg.vol_values = raw.list("volatility", "values");

    if (raw.has("jump")) {
        cfg.has_jump = true;
        cfg.jump_coefficient = raw.str("jump", "coefficient", "constant");
        cfg.eta0 = raw.num("jump", "eta0", 0.0);
        cfg.eta_breaks = raw.list("jump", "breakpoints");
        cfg.eta_levels = raw.list("jump", "levels");
        cfg.eta_t_grid = raw.list("jump", "t_grid");
        cfg.eta_u_grid = raw.list("jump", "u_grid");
        cfg.eta_values = raw.list("jump", "values");
        cfg.intensity = raw.num("jump", "intensity", 0.0);
        cfg.size_dist = raw.str("jump", "size_dist", "");
        if (cfg.size_dist.empty())
            fail("jump.size_dist", "required (normal | exponential)");
        cfg.mu_j = raw.num("jump", "mu_j", 0.0);
        cfg.sigma_j = raw.num("jump", "sigma_j", 0.0);
        cfg.lambda_j = raw.num("jump", "lambda_j", 0.0);
    }

    if (raw.has("drift")) {
        cfg.has_drift = true;
        cfg.mu_variant = raw.str("drift", "mu_variant", "constant");
        cfg.mu0 = raw.num("drift", "mu0", 0.0);
        cfg.mu_t_grid = raw.list("drift", "mu_t_grid");
        cfg.mu_u_grid = raw.list("drift", "mu_u_grid");
        cfg.mu_values = raw.list("drift", "mu_values");
        cfg.kappa_variant = raw.str("drift", "kappa_variant", "constant");
        cfg.kappa0 = raw.num("drift", "kappa0", 0.0);
        cfg.kappa_t_grid = raw.list("drift", "kappa_t_grid");
        cfg.kappa_values = raw.list("drift", "kappa_values");
    }

    if (raw.has("initial")) {
        cfg.initial_variant = raw.str("initial", "variant", "constant");
        cfg.f0 = raw.num("initial", "f0", 1.0);
        cfg.f0_taus = raw.list("initial", "taus");
        cfg.f0_values = raw.list("initial", "values");
    }

    if (raw.has("stochvol")) {
        cfg.has_stochvol = true;
        cfg.kappa_nu = raw.num("stochvol", "kappa_nu", 0.0);
        cfg.theta_nu = raw.num("stochvol", "theta_nu", 0.0);
        cfg.sigma_nu = raw.num("stochvol", "sigma_nu", 0.0);
        cfg.nu0 = raw.num("stochvol", "nu0", 0.0);
        cfg.rho = raw.num("stochvol", "rho", 0.0);
        cfg.delta_nu = raw.num("stochvol", "delta_nu", 0.0);
        cfg.mpr_mode = raw.str("stochvol", "mpr", "true");
        cfg.pi1_value = raw.num("stochvol", "pi1", 0.0);
    }

    if (raw.has("simulation")) {
        cfg.measure = raw.str("simulation", "measure", "Q");
        cfg.t_steps = static_cast<int>(raw.num("simulation", "t_steps", 64));
        cfg.n_paths = static_cast<long>(raw.num("simulation", "n_paths", 10000));
        cfg.seed = static_cast<std::uint64_t>(raw.num("simulation", "seed", 42));
        cfg.quad_order = static_cast<int>(raw.num("simulation", "quad_order", 64));
        cfg.checkpoints = static_cast<int>(raw.num("simulation", "checkpoints", 9));
        cfg.batch_paths = static_cast<long>(raw.num("simulation", "batch_paths", 8192));
        bool have = false;
        const double state = raw.num("simulation", "lnf_state", 0.0, &have);
        if (have)
            cfg.lnf_state = state;
    }

    if (raw.has("output")) {
        cfg.directory = raw.str("output", "directory", "out");
        cfg.precision = static_cast<int>(raw.num("output", "precision", 12));
    }

    raw.check_consumed();
    return cfg;
}

WeightScheme build_weight_scheme(const ScenarioConfig& cfg) {
    if (cfg.scheme == "uniform")
        return WeightScheme::uniform();
    if (cfg.scheme == "discounted") {
        if (!(cfg.rate > 0.0))
            fail("delivery.rate", "discounted scheme needs rate > 0");
        return WeightScheme::discounted(cfg.rate);
    }
    if (cfg.scheme == "tabulated")
        return WeightScheme::tabulated(cfg.knots_u, cfg.knots_w);
    fail("delivery.scheme", "unknown scheme '" + cfg.scheme + "'");
}

DeliveryPeriod build_period(const ScenarioConfig& cfg) { return DeliveryPeriod(cfg.tau1, cfg.tau2); }

QuadratureRule build_quadrature(const ScenarioConfig& cfg) { return QuadratureRule(cfg.quad_order); }

VolatilityCurve build_volatility(const ScenarioConfig& cfg) {
    if (cfg.vol_variant == "constant")
        return VolatilityCurve::constant(cfg.sigma0);
    if (cfg.vol_variant == "seasonal")
        return VolatilityCurve::seasonal(cfg.a, cfg.b, cfg.c);
    if (cfg.vol_variant == "samuelson")
        return VolatilityCurve::samuelson(cfg.lambda_bar, cfg.damping);
    if (cfg.vol_variant == "tabulated")
        return VolatilityCurve::tabulated(cfg.vol_t_grid, cfg.vol_u_grid, cfg.vol_values);
    fail("volatility.variant", "unknown variant '" + cfg.vol_variant + "'");
}

std::optional<JumpSpec> build_jumps(const ScenarioConfig& cfg, MeasureTag tag) {
    if (!cfg.has_jump)
        return std::nullopt;
    JumpCoefficientCurve eta = [&] {
        if (cfg.jump_coefficient == "constant")
            return JumpCoefficientCurve::constant(cfg.eta0);
        if (cfg.jump_coefficient == "piecewise")
            return JumpCoefficientCurve::piecewise_in_delivery(cfg.eta_breaks, cfg.eta_levels);
        if (cfg.jump_coefficient == "tabulated")
            return JumpCoefficientCurve::tabulated(cfg.eta_t_grid, cfg.eta_u_grid, cfg.eta_values);
        fail("jump.coefficient", "unknown variant '" + cfg.jump_coefficient + "'");
    }();
    JumpSizeDistribution dist = [&] {
        if (cfg.size_dist == "normal")
            return JumpSizeDistribution::normal(cfg.mu_j, cfg.sigma_j);
        if (cfg.size_dist == "exponential")
            return JumpSizeDistribution::exponential(cfg.lambda_j);
        if (cfg.size_dist == "lognormal")
            return JumpSizeDistribution::lognormal(cfg.mu_j, cfg.sigma_j);
        fail("jump.size_dist", "unknown distribution '" + cfg.size_dist + "'");
    }();
    return JumpSpec{std::move(eta), LevyMeasure(cfg.intensity, dist, tag)};
}

InitialCurve build_initial_curve(const ScenarioConfig& cfg) {
    if (cfg.initial_variant == "constant")
        return InitialCurve::constant(cfg.f0);
    if (cfg.initial_variant == "tabulated")
        return InitialCurve::tabulated(cfg.f0_taus, cfg.f0_values);
    fail("initial.variant", "unknown variant '" + cfg.initial_variant + "'");
}

FuturesModel build_model(const ScenarioConfig& cfg, MeasureTag measure) {
    VolatilityCurve sigma = build_volatility(cfg);
    InitialCurve f0 = build_initial_curve(cfg);
    auto jumps = build_jumps(cfg, measure);
    if (measure == MeasureTag::artificial)
        return FuturesModel::artificial(std::move(sigma), std::move(f0), std::move(jumps));
    if (!cfg.has_drift)
        fail("drift", "section required for physical-measure runs");
    DriftCurve mu = [&] {
        if (cfg.mu_variant == "constant")
            return DriftCurve::constant(cfg.mu0);
        if (cfg.mu_variant == "tabulated")
            return DriftCurve::tabulated(cfg.mu_t_grid, cfg.mu_u_grid, cfg.mu_values);
        fail("drift.mu_variant", "unknown variant '" + cfg.mu_variant + "'");
    }();
    MeanReversion kappa = [&] {
        if (cfg.kappa_variant == "constant")
            return MeanReversion::constant(cfg.kappa0);
        if (cfg.kappa_variant == "tabulated")
            return MeanReversion::tabulated(cfg.kappa_t_grid, cfg.kappa_values);
        fail("drift.kappa_variant", "unknown variant '" + cfg.kappa_variant + "'");
    }();
    return FuturesModel::physical(std::move(sigma), std::move(f0),
                                  PhysicalDrift{std::move(mu), std::move(kappa)}, std::move(jumps));
}

CirParams build_cir(const ScenarioConfig& cfg) {
    if (!cfg.has_stochvol)
        fail("stochvol", "section is required for this command");
    return CirParams(cfg.kappa_nu, cfg.theta_nu, cfg.sigma_nu, cfg.nu0, cfg.rho, cfg.delta_nu);
}

MprSpec build_mpr_spec(const ScenarioConfig& cfg) {
    MprSpec spec;
    if (cfg.mpr_mode == "zero")
        spec.mode = MprSpec::Mode::zero;
    else if (cfg.mpr_mode == "constant_pi1")
        spec.mode = MprSpec::Mode::constant_pi1;
    else if (cfg.mpr_mode == "true")
        spec.mode = MprSpec::Mode::true_mpr;
    else
        fail("stochvol.mpr", "unknown mode '" + cfg.mpr_mode + "'");
    spec.pi1_value = cfg.pi1_value;
    return spec;
}

SimGrid build_sim_grid(const ScenarioConfig& cfg) {
    const DeliveryPeriod period = build_period(cfg);
    TimeGrid time(cfg.t_steps, period.tau1, cfg.n_paths, cfg.seed,
                  TimeGrid::spaced_checkpoints(cfg.t_steps, cfg.checkpoints));
    return SimGrid(std::move(time), build_weight_scheme(cfg), period, build_quadrature(cfg));
}

}  // namespace elswap
