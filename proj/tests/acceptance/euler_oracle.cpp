#include "euler_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace euler_oracle {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

inline std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Open interval (0, 1).
inline double unit(std::uint64_t counter) {
    return (static_cast<double>(mix(counter) >> 11) + 0.5) * 0x1.0p-53;
}

// Replicas per block; the block's state stays in cache across substeps.
constexpr std::size_t kBlock = 2048;

}  // namespace

void simulate(double lambda, double alpha, double sigma, double beta, double x0, double dt, std::size_t substeps,
              std::uint64_t seed, double* x, std::size_t replicas) {
    const double h = dt / static_cast<double>(substeps);
    const double decay = 1.0 - lambda * h;
    const double gain = beta * sigma * std::pow(h, 1.0 / alpha);
    const double inv_alpha = 1.0 / alpha;
    const double tilt = (1.0 - alpha) / alpha;
    const std::uint64_t base = mix(seed);

    for (std::size_t start = 0; start < replicas; start += kBlock) {
        const std::size_t stop = std::min(replicas, start + kBlock);
        double* block = x + start;
        const std::size_t n = stop - start;
        for (std::size_t r = 0; r < n; ++r) block[r] = x0;
        for (std::size_t k = 0; k < substeps; ++k) {
            // Two uniforms per (replica, substep), disjoint across the run.
            const std::uint64_t row = base + 2 * kGolden * (k * replicas + start);
            if (alpha == 1.0) {
                for (std::size_t r = 0; r < n; ++r) {
                    const double v = std::numbers::pi * (unit(row + 2 * kGolden * r) - 0.5);
                    block[r] = decay * block[r] + gain * std::tan(v);
                }
            } else {
                for (std::size_t r = 0; r < n; ++r) {
                    const std::uint64_t c = row + 2 * kGolden * r;
                    const double v = std::numbers::pi * (unit(c) - 0.5);
                    const double w = -std::log(unit(c + kGolden));
                    const double z = std::sin(alpha * v) *
                                     std::exp(tilt * std::log(std::cos(v - alpha * v) / w) - inv_alpha * std::log(std::cos(v)));
                    block[r] = decay * block[r] + gain * z;
                }
            }
        }
    }
}

}  // namespace euler_oracle
