#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "elswap/dynamics.hpp"

namespace elswap {

/// Streaming mean / standard-error accumulator.
struct RunningStat {
    long n = 0;
    double sum = 0.0;
    double sumsq = 0.0;

    void add(double x) {
        ++n;
        sum += x;
        sumsq += x * x;
    }
    double mean() const { return n > 0 ? sum / n : 0.0; }
    double variance() const {
        if (n < 2)
            return 0.0;
        const double m = mean();
        return std::max(0.0, (sumsq - n * m * m) / (n - 1));
    }
    double se() const { return n > 1 ? std::sqrt(variance() / n) : 0.0; }
};

struct CheckpointStat {
    double t;
    double mean;
    double se;
    double z;
};

/// Monte Carlo martingale verdict: pass iff |z| <= 3 at every checkpoint
/// (zero-variance series are compared exactly).
struct MartingaleReport {
    std::string target;
    double initial = 0.0;
    std::vector<CheckpointStat> rows;
    bool pass = false;
};

MartingaleReport martingale_test(std::string target, const PathSeries& series,
                                 const std::vector<double>& times, double initial);

MartingaleReport martingale_from_stats(std::string target, const std::vector<RunningStat>& stats,
                                       const std::vector<double>& times, double initial);

/// Self-referencing variants: the first checkpoint (the deterministic start
/// of the simulated series) provides the initial value, so its zero-variance
/// row compares exactly by construction.
MartingaleReport martingale_test(std::string target, const PathSeries& series,
                                 const std::vector<double>& times);
MartingaleReport martingale_from_stats(std::string target, const std::vector<RunningStat>& stats,
                                       const std::vector<double>& times);

/// Max relative deviation between two series against a tolerance.
struct IdentityReport {
    std::string name;
    double max_rel_dev = 0.0;
    double tol = 0.0;
    bool pass = false;
};

IdentityReport identity_test(std::string name, std::span<const double> lhs,
                             std::span<const double> rhs, double tol);

}  // namespace elswap
