#include "elswap/levy.hpp"

#include <cmath>
#include <stdexcept>

namespace elswap {

JumpSizeDistribution JumpSizeDistribution::normal(double mu_j, double sigma_j) {
    if (!(sigma_j > 0.0))
        throw std::invalid_argument("normal jump sizes: sigma_j must be > 0");
    return JumpSizeDistribution(Kind::normal, mu_j, sigma_j);
}

JumpSizeDistribution JumpSizeDistribution::exponential(double lambda_j) {
    if (!(lambda_j > 0.0))
        throw std::invalid_argument("exponential jump sizes: lambda_j must be > 0");
    return JumpSizeDistribution(Kind::exponential, lambda_j, 0.0);
}

JumpSizeDistribution JumpSizeDistribution::lognormal(double, double) {
    throw std::invalid_argument(
        "lognormal jump sizes are not supported: E[e^{r Z}] is infinite for every r > 0, "
        "so no compensator or market price of jump risk exists for this law");
}

double JumpSizeDistribution::mgf_domain_sup() const {
    return kind_ == Kind::normal ? std::numeric_limits<double>::infinity() : p1_;
}

bool JumpSizeDistribution::mgf_admissible(double r) const {
    if (kind_ == Kind::normal)
        return std::isfinite(r);
    return r <= (1.0 - 1e-9) * p1_;
}

double JumpSizeDistribution::mgf(double r) const {
    switch (kind_) {
        case Kind::normal:
            return std::exp(p1_ * r + 0.5 * p2_ * p2_ * r * r);
        case Kind::exponential:
            if (!mgf_admissible(r))
                throw std::domain_error("exponential jump sizes: MGF requires r < lambda_j");
            return 1.0 / (1.0 - r / p1_);
    }
    throw std::logic_error("unreachable");
}

double JumpSizeDistribution::mgf_m1(double r) const {
    switch (kind_) {
        case Kind::normal:
            return std::expm1(p1_ * r + 0.5 * p2_ * p2_ * r * r);
        case Kind::exponential:
            if (!mgf_admissible(r))
                throw std::domain_error("exponential jump sizes: MGF requires r < lambda_j");
            return r / (p1_ - r);
    }
    throw std::logic_error("unreachable");
}

double JumpSizeDistribution::moment(int n) const {
    if (n < 1 || n > 4)
        throw std::domain_error("jump size moment: n must be in 1..4");
    if (kind_ == Kind::normal) {
        const double m = p1_, s2 = p2_ * p2_;
        switch (n) {
            case 1: return m;
            case 2: return m * m + s2;
            case 3: return m * m * m + 3.0 * m * s2;
            default: return m * m * m * m + 6.0 * m * m * s2 + 3.0 * s2 * s2;
        }
    }
    double v = 1.0;
    for (int k = 1; k <= n; ++k)
        v *= k / p1_;
    return v;
}

double JumpSizeDistribution::tail_mass_above(double z) const {
    if (kind_ == Kind::normal)
        return 0.5 * std::erfc((z - p1_) / (p2_ * std::sqrt(2.0)));
    return z <= 0.0 ? 1.0 : std::exp(-p1_ * z);
}

double JumpSizeDistribution::tail_mass_below(double z) const {
    if (kind_ == Kind::normal)
        return 0.5 * std::erfc((p1_ - z) / (p2_ * std::sqrt(2.0)));
    return z <= 0.0 ? 0.0 : -std::expm1(-p1_ * z);
}

double JumpSizeDistribution::sample(const PathRng& rng, std::uint32_t step, Stream s,
                                    std::uint32_t idx) const {
    if (kind_ == Kind::normal)
        return p1_ + p2_ * rng.normal(step, s, idx);
    return -std::log(rng.uniform(step, s, idx)) / p1_;
}

LevyMeasure::LevyMeasure(double lambda, JumpSizeDistribution d, MeasureTag m)
    : intensity(lambda), dist(d), measure(m) {
    if (!(lambda > 0.0))
        throw std::invalid_argument("Levy measure: intensity must be > 0");
}

double psi(const LevyMeasure& levy, double r) {
    if (r == 0.0)
        return 0.0;
    double v;
    if (levy.dist.kind() == JumpSizeDistribution::Kind::exponential) {
        if (!levy.dist.mgf_admissible(r))
            throw std::domain_error("psi: r outside the exponential MGF domain");
        // M(r) - 1 - r/lambda_j collapses to r^2 / (lambda_j (lambda_j - r)).
        const double lj = levy.dist.lambda_j();
        v = r * r / (lj * (lj - r));
    } else {
        v = levy.dist.mgf_m1(r) - r * levy.dist.moment(1);
    }
    if (v < 0.0 && v > -1e-12)
        v = 0.0;
    return levy.intensity * v;
}

double compensator_cq(double sigma_tu, const LevyMeasure& levy, double eta_tu) {
    return 0.5 * sigma_tu * sigma_tu + psi(levy, eta_tu);
}

}  // namespace elswap
