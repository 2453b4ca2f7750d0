#include "elswap/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "elswap/quadrature.hpp"
#include "elswap/rng.hpp"

namespace elswap {

namespace {

void run_parallel(long begin, long end, int threads, const std::function<void(long, long)>& body) {
    const long n = end - begin;
    if (n <= 0)
        return;
    int nt = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    nt = static_cast<int>(std::max<long>(1, std::min<long>(nt, n)));
    if (nt == 1) {
        body(begin, end);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(nt);
    const long chunk = (n + nt - 1) / nt;
    for (int i = 0; i < nt; ++i) {
        const long lo = begin + i * chunk;
        const long hi = std::min(end, lo + chunk);
        if (lo >= hi)
            break;
        pool.emplace_back(body, lo, hi);
    }
    for (auto& t : pool)
        t.join();
}

/// Deterministic per-step coefficient tables shared by the simulation and
/// every derived series. Numerically constant sigma/eta rows are
/// canonicalized so delivery-independent inputs give exactly degenerate
/// outputs (V = 0, delta = 0).
struct StepTables {
    int n_steps = 0;
    int n_nodes = 0;
    double dt = 0.0;
    bool physical = false;
    bool has_jumps = false;
    double lambda = 0.0;
    double m1 = 0.0;  // E[Z] under G

    std::vector<double> sigma;      // [k][j]
    std::vector<double> eta;        // [k][j]
    std::vector<double> eta_delta;  // [k][j], eta - E[eta], snapped when constant
    std::vector<double> cq;         // [k][j], Q only
    std::vector<double> mu;         // [k][j], P only
    std::vector<double> decay;      // [k], e^{-int kappa}, P only (1 under Q)

    std::vector<double> e_sigma;   // [k]
    std::vector<double> e_sigma2;  // [k]
    std::vector<double> v_sigma;   // [k]
    std::vector<double> e_mu;      // [k]
    std::vector<double> e_eta;     // [k]
    std::vector<double> eu_m;      // [k], E_U[M(eta(t_k, U))]
    std::vector<double> m_of_e;    // [k], M(E_U[eta(t_k, U)])

    std::size_t at(int k, int j) const { return static_cast<std::size_t>(k) * n_nodes + j; }
};

bool numerically_constant(const double* row, int n) {
    const double lo = *std::min_element(row, row + n);
    const double hi = *std::max_element(row, row + n);
    return hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(lo), std::abs(hi));
}

StepTables build_tables(const FuturesModel& model, const SimGrid& grid) {
    StepTables tb;
    tb.n_steps = grid.time.t_steps;
    tb.n_nodes = grid.n_nodes();
    tb.dt = grid.time.dt();
    tb.physical = model.measure == MeasureTag::physical;
    tb.has_jumps = model.jumps.has_value();
    if (tb.physical && !model.drift)
        throw std::invalid_argument("simulation: physical-measure model requires a drift specification");

    const int K = tb.n_steps, J = tb.n_nodes;
    tb.sigma.resize(static_cast<std::size_t>(K) * J);
    tb.e_sigma.resize(K);
    tb.e_sigma2.resize(K);
    tb.v_sigma.resize(K);
    tb.decay.assign(K, 1.0);
    if (tb.has_jumps) {
        tb.lambda = model.jumps->levy.intensity;
        tb.m1 = model.jumps->levy.dist.moment(1);
        tb.eta.resize(static_cast<std::size_t>(K) * J);
        tb.eta_delta.resize(static_cast<std::size_t>(K) * J);
        tb.e_eta.resize(K);
        tb.eu_m.resize(K);
        tb.m_of_e.resize(K);
    }
    if (!tb.physical)
        tb.cq.resize(static_cast<std::size_t>(K) * J);
    if (tb.physical) {
        tb.mu.resize(static_cast<std::size_t>(K) * J);
        tb.e_mu.resize(K);
    }

    const auto& w = grid.weights;
    for (int k = 0; k < K; ++k) {
        const double t = grid.time.time(k);
        double* srow = &tb.sigma[tb.at(k, 0)];
        for (int j = 0; j < J; ++j)
            srow[j] = model.sigma(t, grid.nodes[j]);
        if (numerically_constant(srow, J)) {
            std::fill(srow, srow + J, srow[0]);
            tb.e_sigma[k] = srow[0];
            tb.e_sigma2[k] = srow[0] * srow[0];
            tb.v_sigma[k] = 0.0;
        } else {
            double m = 0.0, m2 = 0.0;
            for (int j = 0; j < J; ++j) {
                m += w[j] * srow[j];
                m2 += w[j] * srow[j] * srow[j];
            }
            tb.e_sigma[k] = m;
            tb.e_sigma2[k] = m2;
            double var = m2 - m * m;
            if (std::abs(var) < 1e-14)
                var = 0.0;
            tb.v_sigma[k] = var;
        }
        if (!(tb.e_sigma[k] > 0.0))
            throw std::runtime_error("simulation: E[sigma(t, U)] must be > 0");

        if (tb.has_jumps) {
            const auto& dist = model.jumps->levy.dist;
            double* erow = &tb.eta[tb.at(k, 0)];
            double* drow = &tb.eta_delta[tb.at(k, 0)];
            for (int j = 0; j < J; ++j) {
                erow[j] = model.jumps->eta(t, grid.nodes[j]);
                if (!dist.mgf_admissible(erow[j])) {
                    std::ostringstream os;
                    os << "simulation: eta(t=" << t << ", u=" << grid.nodes[j]
                       << ") = " << erow[j] << " outside the exponential MGF domain";
                    throw std::domain_error(os.str());
                }
            }
            if (numerically_constant(erow, J)) {
                std::fill(erow, erow + J, erow[0]);
                tb.e_eta[k] = erow[0];
                std::fill(drow, drow + J, 0.0);
                tb.eu_m[k] = dist.mgf(erow[0]);
                tb.m_of_e[k] = tb.eu_m[k];
            } else {
                double m = 0.0;
                for (int j = 0; j < J; ++j)
                    m += w[j] * erow[j];
                tb.e_eta[k] = m;
                double eum = 0.0;
                for (int j = 0; j < J; ++j) {
                    drow[j] = erow[j] - m;
                    eum += w[j] * dist.mgf(erow[j]);
                }
                if (!dist.mgf_admissible(m))
                    throw std::domain_error("simulation: E[eta(t, U)] outside the exponential MGF domain");
                tb.eu_m[k] = eum;
                tb.m_of_e[k] = dist.mgf(m);
            }
        }

        if (tb.physical) {
            double* mrow = &tb.mu[tb.at(k, 0)];
            double m = 0.0;
            for (int j = 0; j < J; ++j) {
                mrow[j] = model.drift->mu(t, grid.nodes[j]);
                m += w[j] * mrow[j];
            }
            tb.e_mu[k] = m;
            tb.decay[k] =
                std::exp(-model.drift->kappa.integral(grid.time.time(k), grid.time.time(k + 1)));
        } else {
            const double* er = tb.has_jumps ? &tb.eta[tb.at(k, 0)] : nullptr;
            for (int j = 0; j < J; ++j) {
                double c = 0.5 * srow[j] * srow[j];
                if (tb.has_jumps)
                    c += psi(model.jumps->levy, er[j]);
                tb.cq[tb.at(k, j)] = c;
            }
        }
    }
    return tb;
}

/// ln E_U[e^{eta(t_k, U) z}] - E_U[eta(t_k, U)] z, the per-mark averaging
/// spread increment; exactly zero for delivery-independent eta.
double log_avg_exp_excess(const StepTables& tb, const std::vector<double>& w, int k, double z) {
    const double* d = &tb.eta_delta[tb.at(k, 0)];
    double acc = 0.0;
    for (int j = 0; j < tb.n_nodes; ++j)
        acc += w[j] * std::expm1(d[j] * z);
    return std::log1p(acc);
}

int draw_marks(const PathRng& rng, const JumpSizeDistribution& dist, double mean, int k,
               std::vector<JumpMark>& out) {
    const int n = rng.poisson(mean, static_cast<std::uint32_t>(k), Stream::jump_count);
    for (int i = 0; i < n; ++i)
        out.push_back(
            {k, dist.sample(rng, static_cast<std::uint32_t>(k), Stream::jump_size, static_cast<std::uint32_t>(i))});
    return n;
}

}  // namespace

PathSet simulate_paths(const FuturesModel& model, const SimGrid& grid, long first_path, long count,
                       int threads) {
    const StepTables tb = build_tables(model, grid);
    const int K = tb.n_steps, J = tb.n_nodes;
    const auto& cps = grid.time.checkpoints;
    const double dt = tb.dt;
    const double sqdt = std::sqrt(dt);

    PathSet ps;
    ps.first_path = first_path;
    ps.n_paths = count;
    ps.n_steps = K;
    ps.n_nodes = J;
    ps.checkpoints = cps;
    ps.ln_f.resize(static_cast<std::size_t>(count) * cps.size() * J);
    ps.dw.resize(static_cast<std::size_t>(count) * K);
    ps.marks.resize(count);

    std::vector<double> lnf0(J);
    for (int j = 0; j < J; ++j)
        lnf0[j] = std::log(model.f0(grid.nodes[j]));

    run_parallel(0, count, threads, [&](long lo, long hi) {
        std::vector<double> lnf(J);
        for (long p = lo; p < hi; ++p) {
            const PathRng rng(grid.time.seed, static_cast<std::uint64_t>(first_path + p));
            lnf = lnf0;
            std::size_t cp = 0;
            if (cps[0] == 0) {
                std::copy(lnf.begin(), lnf.end(), &ps.ln_f[(p * cps.size() + 0) * J]);
                cp = 1;
            }
            auto& marks = ps.marks[p];
            for (int k = 0; k < K; ++k) {
                const double dw = sqdt * rng.normal(static_cast<std::uint32_t>(k), Stream::diffusion, 0);
                ps.dw[static_cast<std::size_t>(p) * K + k] = dw;
                double dj = 0.0;
                if (tb.has_jumps) {
                    const std::size_t m0 = marks.size();
                    draw_marks(rng, model.jumps->levy.dist, tb.lambda * dt, k, marks);
                    double sumz = 0.0;
                    for (std::size_t i = m0; i < marks.size(); ++i)
                        sumz += marks[i].size;
                    dj = sumz - tb.lambda * tb.m1 * dt;
                }
                const double* srow = &tb.sigma[tb.at(k, 0)];
                const double* erow = tb.has_jumps ? &tb.eta[tb.at(k, 0)] : nullptr;
                if (tb.physical) {
                    const double d = tb.decay[k];
                    const double* mrow = &tb.mu[tb.at(k, 0)];
                    for (int j = 0; j < J; ++j) {
                        double x = d * lnf[j] + mrow[j] * dt + srow[j] * dw;
                        if (erow)
                            x += erow[j] * dj;
                        lnf[j] = x;
                    }
                } else {
                    const double* crow = &tb.cq[tb.at(k, 0)];
                    for (int j = 0; j < J; ++j) {
                        double x = lnf[j] + srow[j] * dw - crow[j] * dt;
                        if (erow)
                            x += erow[j] * dj;
                        lnf[j] = x;
                    }
                }
                if (cp < cps.size() && cps[cp] == k + 1) {
                    std::copy(lnf.begin(), lnf.end(), &ps.ln_f[(p * cps.size() + cp) * J]);
                    ++cp;
                }
            }
        }
    });
    return ps;
}

PathSet simulate_paths(const FuturesModel& model, const SimGrid& grid, int threads) {
    return simulate_paths(model, grid, 0, grid.time.n_paths, threads);
}

PathSeries swap_geometric(const PathSet& paths, const SimGrid& grid) {
    PathSeries out;
    out.n_paths = paths.n_paths;
    out.checkpoints = paths.checkpoints;
    out.values.resize(static_cast<std::size_t>(paths.n_paths) * paths.checkpoints.size());
    const int J = paths.n_nodes;
    for (long p = 0; p < paths.n_paths; ++p)
        for (int c = 0; c < out.n_cp(); ++c) {
            double acc = 0.0;
            for (int j = 0; j < J; ++j)
                acc += grid.weights[j] * paths.lnf(p, c, j);
            out.at(p, c) = std::exp(acc);
        }
    return out;
}

PathSeries swap_arithmetic(const PathSet& paths, const SimGrid& grid) {
    PathSeries out;
    out.n_paths = paths.n_paths;
    out.checkpoints = paths.checkpoints;
    out.values.resize(static_cast<std::size_t>(paths.n_paths) * paths.checkpoints.size());
    const int J = paths.n_nodes;
    for (long p = 0; p < paths.n_paths; ++p)
        for (int c = 0; c < out.n_cp(); ++c) {
            double acc = 0.0;
            for (int j = 0; j < J; ++j)
                acc += grid.weights[j] * std::exp(paths.lnf(p, c, j));
            out.at(p, c) = acc;
        }
    return out;
}

namespace {

/// Walk a path's steps, calling on_step(k, dW, marks_begin, marks_end) in
/// order and capture() after each checkpoint step.
template <class OnStep, class Capture>
void replay(const PathSet& paths, long p, OnStep&& on_step, Capture&& capture) {
    const auto& cps = paths.checkpoints;
    std::size_t cp = 0;
    if (cps[0] == 0) {
        capture(0);
        cp = 1;
    }
    const auto& marks = paths.marks[p];
    std::size_t m = 0;
    for (int k = 0; k < paths.n_steps; ++k) {
        std::size_t m0 = m;
        while (m < marks.size() && marks[m].step == k)
            ++m;
        on_step(k, paths.dW(p, k), marks.data() + m0, marks.data() + m);
        if (cp < cps.size() && cps[cp] == k + 1) {
            capture(static_cast<int>(cp));
            ++cp;
        }
    }
}

}  // namespace

PathSeries swap_approximated(const FuturesModel& model, const PathSet& paths, const SimGrid& grid) {
    const StepTables tb = build_tables(model, grid);
    const double dt = tb.dt;
    PathSeries out;
    out.n_paths = paths.n_paths;
    out.checkpoints = paths.checkpoints;
    out.values.resize(static_cast<std::size_t>(paths.n_paths) * paths.checkpoints.size());

    const double ln_f0 = [&] {
        double acc = 0.0;
        for (int j = 0; j < grid.n_nodes(); ++j)
            acc += grid.weights[j] * std::log(model.f0(grid.nodes[j]));
        return acc;
    }();

    for (long p = 0; p < paths.n_paths; ++p) {
        double ln_fa = ln_f0;
        double ln_f = ln_f0;  // geometric-swap state, feeds the OU decay under P
        replay(
            paths, p,
            [&](int k, double dw, const JumpMark* mb, const JumpMark* me) {
                double jump_add = 0.0;
                double sumz = 0.0;
                if (tb.has_jumps)
                    for (const JumpMark* m = mb; m != me; ++m) {
                        jump_add += tb.e_eta[k] * m->size +
                                    log_avg_exp_excess(tb, grid.weights, k, m->size);
                        sumz += m->size;
                    }
                if (tb.physical) {
                    ln_fa += (tb.decay[k] - 1.0) * ln_f + tb.e_mu[k] * dt + 0.5 * tb.v_sigma[k] * dt +
                             tb.e_sigma[k] * dw + jump_add;
                    if (tb.has_jumps)
                        ln_fa -= tb.e_eta[k] * tb.lambda * tb.m1 * dt;
                    double lf = tb.decay[k] * ln_f + tb.e_mu[k] * dt + tb.e_sigma[k] * dw;
                    if (tb.has_jumps)
                        lf += tb.e_eta[k] * (sumz - tb.lambda * tb.m1 * dt);
                    ln_f = lf;
                } else {
                    double drift = 0.5 * tb.e_sigma[k] * tb.e_sigma[k];
                    if (tb.has_jumps)
                        drift += tb.lambda * (tb.eu_m[k] - 1.0);
                    ln_fa += tb.e_sigma[k] * dw - drift * dt + jump_add;
                }
            },
            [&](int cp) { out.at(p, cp) = std::exp(ln_fa); });
    }
    return out;
}

PathSeries discount_factor_d(const FuturesModel& model, const PathSet& paths, const SimGrid& grid) {
    const StepTables tb = build_tables(model, grid);
    const double dt = tb.dt;
    PathSeries out;
    out.n_paths = paths.n_paths;
    out.checkpoints = paths.checkpoints;
    out.values.resize(static_cast<std::size_t>(paths.n_paths) * paths.checkpoints.size());

    for (long p = 0; p < paths.n_paths; ++p) {
        double ln_d = 0.0;
        replay(
            paths, p,
            [&](int k, double, const JumpMark* mb, const JumpMark* me) {
                ln_d -= 0.5 * tb.v_sigma[k] * dt;
                if (tb.has_jumps)
                    for (const JumpMark* m = mb; m != me; ++m)
                        ln_d -= log_avg_exp_excess(tb, grid.weights, k, m->size);
            },
            [&](int cp) { out.at(p, cp) = std::exp(ln_d); });
    }
    return out;
}

PathSeries radon_nikodym_z(std::span<const double> pi1, std::span<const double> pi2,
                           const FuturesModel& model, const PathSet& paths, const SimGrid& grid) {
    if (static_cast<int>(pi1.size()) != paths.n_steps || static_cast<int>(pi2.size()) != paths.n_steps)
        throw std::invalid_argument("radon_nikodym_z: pi series must have one value per step");
    const double dt = grid.time.dt();
    const double lambda = model.lambda();
    for (int k = 0; k < paths.n_steps; ++k)
        if (!(1.0 - pi2[k] > 0.0))
            throw std::runtime_error("radon_nikodym_z: positivity violated, 1 - pi2 <= 0 at step " +
                                     std::to_string(k));

    PathSeries out;
    out.n_paths = paths.n_paths;
    out.checkpoints = paths.checkpoints;
    out.values.resize(static_cast<std::size_t>(paths.n_paths) * paths.checkpoints.size());

    for (long p = 0; p < paths.n_paths; ++p) {
        double ln_z = 0.0;
        replay(
            paths, p,
            [&](int k, double dw, const JumpMark* mb, const JumpMark* me) {
                ln_z += -pi1[k] * dw - 0.5 * pi1[k] * pi1[k] * dt + lambda * pi2[k] * dt;
                for (const JumpMark* m = mb; m != me; ++m) {
                    (void)m;
                    ln_z += std::log1p(-pi2[k]);
                }
            },
            [&](int cp) { out.at(p, cp) = std::exp(ln_z); });
    }
    return out;
}

MpdpSeries mpdp_series(const FuturesModel& model_q, const SimGrid& grid) {
    const StepTables tb = build_tables(model_q, grid);
    MpdpSeries s;
    s.pi1.resize(tb.n_steps);
    s.pi2.assign(tb.n_steps, 0.0);
    for (int k = 0; k < tb.n_steps; ++k) {
        s.pi1[k] = -0.5 * tb.v_sigma[k] / tb.e_sigma[k];
        if (tb.has_jumps) {
            const double num = tb.eu_m[k] - tb.m_of_e[k];
            const double den = tb.m_of_e[k] - 1.0;
            if (num == 0.0)
                s.pi2[k] = 0.0;
            else if (std::abs(den) < 1e-12)
                throw std::runtime_error("mpdp_series: near-zero denominator M(E[eta]) - 1");
            else
                s.pi2[k] = -num / den;
        }
    }
    return s;
}

namespace {

/// Scalar exponential-jump simulation of a swap that is an exact per-step
/// martingale: d ln F = s dW - s^2/2 dt + sum e z_i - intensity (M(e) - 1) dt.
PathSeries simulate_scalar_martingale(double f0, const std::vector<double>& s_bar,
                                      const std::vector<double>& e_bar,
                                      const std::vector<double>& intensity,
                                      const JumpSizeDistribution* dist, const SimGrid& grid,
                                      long first_path, long count, int threads) {
    const int K = grid.time.t_steps;
    const double dt = grid.time.dt();
    const double sqdt = std::sqrt(dt);
    const auto& cps = grid.time.checkpoints;

    std::vector<double> comp(K, 0.0);  // intensity * (M(e_bar) - 1) per unit time
    if (dist)
        for (int k = 0; k < K; ++k)
            comp[k] = intensity[k] * dist->mgf_m1(e_bar[k]);

    PathSeries out;
    out.n_paths = count;
    out.checkpoints = cps;
    out.values.resize(static_cast<std::size_t>(count) * cps.size());

    run_parallel(0, count, threads, [&](long lo, long hi) {
        for (long p = lo; p < hi; ++p) {
            const PathRng rng(grid.time.seed, static_cast<std::uint64_t>(first_path + p));
            double ln_f = std::log(f0);
            std::size_t cp = 0;
            if (cps[0] == 0) {
                out.at(p, 0) = f0;
                cp = 1;
            }
            for (int k = 0; k < K; ++k) {
                const double dw = sqdt * rng.normal(static_cast<std::uint32_t>(k), Stream::diffusion, 0);
                ln_f += s_bar[k] * dw - 0.5 * s_bar[k] * s_bar[k] * dt;
                if (dist) {
                    const int n = rng.poisson(intensity[k] * dt, static_cast<std::uint32_t>(k),
                                              Stream::jump_count);
                    for (int i = 0; i < n; ++i)
                        ln_f += e_bar[k] * dist->sample(rng, static_cast<std::uint32_t>(k),
                                                        Stream::jump_size, static_cast<std::uint32_t>(i));
                    ln_f -= comp[k] * dt;
                }
                if (cp < cps.size() && cps[cp] == k + 1) {
                    out.at(p, cp) = std::exp(ln_f);
                    ++cp;
                }
            }
        }
    });
    return out;
}

}  // namespace

PathSeries simulate_swap_qtilde(const FuturesModel& model_q, const MpdpSeries& mpdp,
                                const SimGrid& grid, long first_path, long count, int threads) {
    if (model_q.measure != MeasureTag::artificial)
        throw std::invalid_argument("simulate_swap_qtilde: a Q-measure model is required");
    const StepTables tb = build_tables(model_q, grid);
    const int K = tb.n_steps;
    if (static_cast<int>(mpdp.pi2.size()) != K)
        throw std::invalid_argument("simulate_swap_qtilde: MPDP series must have one value per step");
    std::vector<double> intensity(K, 0.0);
    const JumpSizeDistribution* dist = nullptr;
    if (tb.has_jumps) {
        dist = &model_q.jumps->levy.dist;
        for (int k = 0; k < K; ++k) {
            intensity[k] = tb.lambda * (1.0 - mpdp.pi2[k]);
            if (!(intensity[k] > 0.0))
                throw std::runtime_error("simulate_swap_qtilde: 1 - pi2 must stay positive");
        }
    }
    return simulate_scalar_martingale(initial_swap_geometric(model_q, grid), tb.e_sigma,
                                      tb.has_jumps ? tb.e_eta : std::vector<double>(K, 0.0),
                                      intensity, dist, grid, first_path, count, threads);
}

PathSeries simulate_swap_qtilde(const FuturesModel& model_q, const MpdpSeries& mpdp,
                                const SimGrid& grid, int threads) {
    return simulate_swap_qtilde(model_q, mpdp, grid, 0, grid.time.n_paths, threads);
}

PathSeries simulate_swap_effective_intensity(const VolatilityCurve& sigma, double eta,
                                             const JumpSizeDistribution& dist, double intensity,
                                             double swap_f0, const SimGrid& grid, int threads) {
    if (!(intensity > 0.0))
        throw std::domain_error("simulate_swap_effective_intensity: intensity must be > 0");
    const int K = grid.time.t_steps;
    std::vector<double> s_bar(K), e_bar(K, eta), lam(K, intensity);
    for (int k = 0; k < K; ++k) {
        double acc = 0.0;
        for (int j = 0; j < grid.n_nodes(); ++j)
            acc += grid.weights[j] * sigma(grid.time.time(k), grid.nodes[j]);
        s_bar[k] = acc;
    }
    return simulate_scalar_martingale(swap_f0, s_bar, e_bar, lam, &dist, grid, 0,
                                      grid.time.n_paths, threads);
}

double effective_intensity(const std::function<double(double)>& lambda_of_u,
                           const WeightScheme& scheme, const DeliveryPeriod& period,
                           const QuadratureRule& quad) {
    const DeliveryAverager avg(scheme, period, quad);
    return avg.expect([&](double u) {
        const double l = lambda_of_u(u);
        if (!(l > 0.0))
            throw std::domain_error("effective_intensity: lambda(u) must be > 0");
        return l;
    });
}

double swap_q_log_drift_integral(const FuturesModel& model_q, const WeightScheme& scheme,
                                 const SimGrid& grid, double t, const QuadratureRule& quad,
                                 int sub_order) {
    if (model_q.measure != MeasureTag::artificial)
        throw std::invalid_argument("swap drift integral: a Q-measure model is required");
    const DeliveryAverager avg(scheme, grid.period, quad);
    auto integrand = [&](double s) {
        double g = 0.5 * avg.variance([&](double u) { return model_q.sigma(s, u); });
        if (model_q.jumps) {
            const auto& dist = model_q.jumps->levy.dist;
            const double eu_m = avg.expect([&](double u) { return dist.mgf(model_q.jumps->eta(s, u)); });
            const double e_eta = avg.expect([&](double u) { return model_q.jumps->eta(s, u); });
            g += model_q.jumps->levy.intensity * (eu_m - dist.mgf(e_eta));
        }
        return g;
    };
    // Composite rule along the simulation steps covering [0, t].
    double acc = 0.0;
    const double dt = grid.time.dt();
    double lo = 0.0;
    while (lo < t - 1e-15) {
        const double hi = std::min(t, lo + dt);
        acc += gauss_legendre_integrate(integrand, lo, hi, sub_order);
        lo = hi;
    }
    return acc;
}

double swap_q_log_drift_riemann(const FuturesModel& model_q, const SimGrid& grid, int upto_step) {
    if (model_q.measure != MeasureTag::artificial)
        throw std::invalid_argument("swap drift sum: a Q-measure model is required");
    const StepTables tb = build_tables(model_q, grid);
    double acc = 0.0;
    for (int k = 0; k < std::min(upto_step, tb.n_steps); ++k) {
        double g = 0.5 * tb.v_sigma[k];
        if (tb.has_jumps)
            g += tb.lambda * (tb.eu_m[k] - tb.m_of_e[k]);
        acc += g * tb.dt;
    }
    return acc;
}

double initial_swap_geometric(const FuturesModel& model, const SimGrid& grid) {
    double acc = 0.0;
    for (int j = 0; j < grid.n_nodes(); ++j)
        acc += grid.weights[j] * std::log(model.f0(grid.nodes[j]));
    return std::exp(acc);
}

double initial_swap_arithmetic(const FuturesModel& model, const SimGrid& grid) {
    double acc = 0.0;
    for (int j = 0; j < grid.n_nodes(); ++j)
        acc += grid.weights[j] * model.f0(grid.nodes[j]);
    return acc;
}

SwapStepCoefficients swap_step_coefficients(const FuturesModel& model, const SimGrid& grid) {
    const StepTables tb = build_tables(model, grid);
    SwapStepCoefficients c;
    c.e_sigma = tb.e_sigma;
    c.e_sigma2 = tb.e_sigma2;
    c.v_sigma = tb.v_sigma;
    c.e_eta = tb.e_eta;
    c.eu_m = tb.eu_m;
    c.m_of_e = tb.m_of_e;
    c.e_mu = tb.e_mu;
    c.decay = tb.decay;
    c.has_jumps = tb.has_jumps;
    c.lambda = tb.lambda;
    c.m1 = tb.m1;
    return c;
}

}  // namespace elswap
