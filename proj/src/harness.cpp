#include "elswap/harness.hpp"

#include <limits>
#include <stdexcept>

namespace elswap {

namespace {

CheckpointStat make_stat(double t, double mean, double se, double initial) {
    CheckpointStat s{t, mean, se, 0.0};
    if (se == 0.0) {
        // Zero-variance series: exact comparison instead of a 0/0 z-score.
        s.z = mean == initial ? 0.0 : std::numeric_limits<double>::infinity();
    } else {
        s.z = (mean - initial) / se;
    }
    return s;
}

bool all_pass(const std::vector<CheckpointStat>& rows) {
    for (const auto& r : rows)
        if (!(std::abs(r.z) <= 3.0))
            return false;
    return true;
}

}  // namespace

MartingaleReport martingale_test(std::string target, const PathSeries& series,
                                 const std::vector<double>& times, double initial) {
    if (series.n_paths < 2)
        throw std::invalid_argument("martingale_test: need at least 2 paths");
    if (times.size() != series.checkpoints.size())
        throw std::invalid_argument("martingale_test: times must match the checkpoints");
    MartingaleReport rep;
    rep.target = std::move(target);
    rep.initial = initial;
    for (int c = 0; c < series.n_cp(); ++c) {
        RunningStat st;
        for (long p = 0; p < series.n_paths; ++p)
            st.add(series.at(p, c));
        rep.rows.push_back(make_stat(times[c], st.mean(), st.se(), initial));
    }
    rep.pass = all_pass(rep.rows);
    return rep;
}

MartingaleReport martingale_from_stats(std::string target, const std::vector<RunningStat>& stats,
                                       const std::vector<double>& times, double initial) {
    if (stats.size() != times.size())
        throw std::invalid_argument("martingale_from_stats: times must match the stats");
    MartingaleReport rep;
    rep.target = std::move(target);
    rep.initial = initial;
    for (std::size_t c = 0; c < stats.size(); ++c) {
        if (stats[c].n < 2)
            throw std::invalid_argument("martingale_from_stats: need at least 2 paths");
        rep.rows.push_back(make_stat(times[c], stats[c].mean(), stats[c].se(), initial));
    }
    rep.pass = all_pass(rep.rows);
    return rep;
}

MartingaleReport martingale_test(std::string target, const PathSeries& series,
                                 const std::vector<double>& times) {
    if (series.n_cp() < 1)
        throw std::invalid_argument("martingale_test: empty series");
    RunningStat st;
    for (long p = 0; p < series.n_paths; ++p)
        st.add(series.at(p, 0));
    return martingale_test(std::move(target), series, times, st.mean());
}

MartingaleReport martingale_from_stats(std::string target, const std::vector<RunningStat>& stats,
                                       const std::vector<double>& times) {
    if (stats.empty())
        throw std::invalid_argument("martingale_from_stats: empty stats");
    return martingale_from_stats(std::move(target), stats, times, stats.front().mean());
}

IdentityReport identity_test(std::string name, std::span<const double> lhs,
                             std::span<const double> rhs, double tol) {
    if (lhs.size() != rhs.size())
        throw std::invalid_argument("identity_test: shape mismatch");
    IdentityReport rep;
    rep.name = std::move(name);
    rep.tol = tol;
    for (std::size_t i = 0; i < lhs.size(); ++i) {
        const double denom = std::max(std::abs(rhs[i]), 1e-300);
        rep.max_rel_dev = std::max(rep.max_rel_dev, std::abs(lhs[i] - rhs[i]) / denom);
    }
    rep.pass = rep.max_rel_dev <= tol;
    return rep;
}

}  // namespace elswap
