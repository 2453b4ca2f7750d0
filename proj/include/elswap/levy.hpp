#pragma once

#include <cstdint>
#include <limits>

#include "elswap/rng.hpp"

namespace elswap {

/// Jump size law G. Normal has a full-line MGF; exponential requires
/// r < lambda_j. Lognormal jump sizes are rejected at construction: their
/// moment generating function is infinite for every positive argument.
class JumpSizeDistribution {
  public:
    enum class Kind { normal, exponential };

    static JumpSizeDistribution normal(double mu_j, double sigma_j);
    static JumpSizeDistribution exponential(double lambda_j);
    [[noreturn]] static JumpSizeDistribution lognormal(double mu_j, double sigma_j);

    Kind kind() const { return kind_; }
    double mu_j() const { return p1_; }
    double sigma_j() const { return p2_; }
    double lambda_j() const { return p1_; }

    /// M_Z(r) = E[e^{r Z}].
    double mgf(double r) const;
    /// M_Z(r) - 1, computed without cancellation near r = 0.
    double mgf_m1(double r) const;
    /// n-th raw moment, n in 1..4.
    double moment(int n) const;
    /// Upper end of the MGF domain (+inf for normal, lambda_j for exponential).
    double mgf_domain_sup() const;
    /// True when r is admissible, with the relative pole margin for exponential.
    bool mgf_admissible(double r) const;

    double tail_mass_above(double z) const;  // P(Z > z)
    double tail_mass_below(double z) const;  // P(Z < z)

    /// One draw from G at the addressed counter position.
    double sample(const PathRng& rng, std::uint32_t step, Stream s, std::uint32_t idx) const;

  private:
    JumpSizeDistribution(Kind k, double p1, double p2) : kind_(k), p1_(p1), p2_(p2) {}

    Kind kind_;
    double p1_, p2_;
};

enum class MeasureTag { physical, artificial };  // P, Q

/// Levy measure ell(dz) = lambda G(dz) of the compound Poisson driver.
struct LevyMeasure {
    double intensity;  // lambda > 0, jumps per year
    JumpSizeDistribution dist;
    MeasureTag measure;

    LevyMeasure(double lambda, JumpSizeDistribution d, MeasureTag m = MeasureTag::artificial);
};

/// Levy-Khintchine integrand psi(r) = int (e^{rz} - 1 - rz) ell(dz)
///                                  = lambda (M(r) - 1 - r E[Z]).
/// Nonnegative and convex in r on the MGF domain.
double psi(const LevyMeasure& levy, double r);

/// Compensator of the logarithmic return, c = sigma^2/2 + psi(eta).
double compensator_cq(double sigma_tu, const LevyMeasure& levy, double eta_tu);

}  // namespace elswap
