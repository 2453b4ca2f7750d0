#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace elswap {

/// Draw address within a path: every random quantity is keyed by
/// (seed, path, step, stream, index), so path simulation is bit-identical
/// under any parallel execution order.
enum class Stream : std::uint32_t {
    diffusion = 0,     // Brownian increment of W
    jump_count = 1,    // Poisson count per step
    jump_size = 2,     // i.i.d. jump sizes within a step
    vol_brownian = 3,  // Brownian increment of B-bar (stochastic volatility)
    cir_normal = 4,    // normal part of the noncentral chi-square transition
    cir_gamma = 5,     // gamma part (rejection attempts consume indices)
};

namespace detail {

/// Philox4x32-10 block cipher (Salmon et al., SC 2011).
inline std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                               std::array<std::uint32_t, 2> key) {
    constexpr std::uint32_t kM0 = 0xD2511F53u, kM1 = 0xCD9E8D57u;
    constexpr std::uint32_t kW0 = 0x9E3779B9u, kW1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * ctr[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * ctr[2];
        ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
               static_cast<std::uint32_t>(p1),
               static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
               static_cast<std::uint32_t>(p0)};
        key[0] += kW0;
        key[1] += kW1;
    }
    return ctr;
}

}  // namespace detail

/// Stateless per-path random stream over the Philox counter space.
class PathRng {
  public:
    PathRng(std::uint64_t seed, std::uint64_t path) : seed_(seed), path_(path) {}

    /// 128 random bits at (step, stream, index).
    std::array<std::uint32_t, 4> block(std::uint32_t step, Stream s, std::uint32_t idx) const {
        const std::array<std::uint32_t, 4> ctr = {
            static_cast<std::uint32_t>(path_), static_cast<std::uint32_t>(path_ >> 32),
            step, (static_cast<std::uint32_t>(s) << 28) | idx};
        const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(seed_),
                                                  static_cast<std::uint32_t>(seed_ >> 32)};
        return detail::philox4x32(ctr, key);
    }

    /// Uniform draw in (0, 1].
    double uniform(std::uint32_t step, Stream s, std::uint32_t idx) const {
        const auto b = block(step, s, idx);
        const std::uint64_t x = (static_cast<std::uint64_t>(b[0]) << 32) | b[1];
        return ((x >> 11) + 1) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller on a single 128-bit block.
    double normal(std::uint32_t step, Stream s, std::uint32_t idx) const {
        const auto b = block(step, s, idx);
        const std::uint64_t xa = (static_cast<std::uint64_t>(b[0]) << 32) | b[1];
        const std::uint64_t xb = (static_cast<std::uint64_t>(b[2]) << 32) | b[3];
        const double u1 = ((xa >> 11) + 1) * 0x1.0p-53;  // (0, 1]
        const double u2 = (xb >> 11) * 0x1.0p-53;        // [0, 1)
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    /// Poisson count by CDF inversion; one uniform per call.
    int poisson(double mean, std::uint32_t step, Stream s) const {
        if (!(mean >= 0.0) || mean > 500.0)
            throw std::invalid_argument("poisson: mean must be in [0, 500]");
        if (mean == 0.0)
            return 0;
        const double u = uniform(step, s, 0);
        double p = std::exp(-mean);
        double cum = p;
        int k = 0;
        while (u > cum && k < 10000) {
            ++k;
            p *= mean / k;
            cum += p;
        }
        return k;
    }

    /// Gamma(shape, 1) by Marsaglia-Tsang; rejection attempts advance the
    /// index within (step, stream), so the draw stays addressable.
    double gamma(double shape, std::uint32_t step, Stream s) const {
        if (!(shape > 0.0))
            throw std::invalid_argument("gamma: shape must be > 0");
        double boost = 1.0;
        std::uint32_t idx = 0;
        if (shape < 1.0) {
            boost = std::pow(uniform(step, s, idx++), 1.0 / shape);
            shape += 1.0;
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (int attempt = 0; attempt < 256; ++attempt) {
            const double x = normal(step, s, idx++);
            const double t = 1.0 + c * x;
            if (t <= 0.0)
                continue;
            const double v = t * t * t;
            const double u = uniform(step, s, idx++);
            if (u < 1.0 - 0.0331 * x * x * x * x)
                return boost * d * v;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v)))
                return boost * d * v;
        }
        throw std::runtime_error("gamma: rejection sampler failed to accept");
    }

  private:
    std::uint64_t seed_;
    std::uint64_t path_;
};

}  // namespace elswap
