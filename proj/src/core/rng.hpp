#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace rl {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// SplitMix64 finalizer; used to derive independent per-chunk seeds from
// (master seed, chunk index) so that results do not depend on which thread
// processes which chunk.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline std::uint64_t chunk_seed(std::uint64_t master_seed, std::uint64_t chunk_index) {
    return mix64(master_seed + chunk_index * 0x9E3779B97F4A7C15ull);
}

// Deterministic per-chunk stream. Distributions are hand-rolled on top of the
// raw engine because std::normal_distribution and friends are not guaranteed
// to produce identical sequences across standard libraries.
class ChunkRng {
public:
    explicit ChunkRng(std::uint64_t seed) : eng_(seed) {}

    // Uniform in [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    // Unit-mean exponential.
    double exponential() { return -std::log1p(-uniform()); }

    std::uint64_t poisson(double mean) {
        if (mean <= 0.0) return 0;
        if (mean < 30.0) {
            // Inversion by sequential search.
            const double L = std::exp(-mean);
            std::uint64_t k = 0;
            double p = 1.0;
            do {
                ++k;
                p *= uniform();
            } while (p > L);
            return k - 1;
        }
        // PTRS transformed rejection (Hormann 1993); exact for large means.
        const double b = 0.931 + 2.53 * std::sqrt(mean);
        const double a = -0.059 + 0.02483 * b;
        const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
        const double v_r = 0.9277 - 3.6224 / (b - 2.0);
        for (;;) {
            double u = uniform() - 0.5;
            double v = uniform();
            double us = 0.5 - std::abs(u);
            double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
            if (us >= 0.07 && v <= v_r) return static_cast<std::uint64_t>(k);
            if (k < 0.0 || (us < 0.013 && v > us)) continue;
            if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
                k * std::log(mean) - mean - std::lgamma(k + 1.0))
                return static_cast<std::uint64_t>(k);
        }
    }

    // Pair of independent standard normals (Box-Muller).
    void normal_pair(double& n1, double& n2) {
        const double u1 = 1.0 - uniform();  // in (0, 1], keeps the log finite
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        n1 = r * std::cos(kTwoPi * u2);
        n2 = r * std::sin(kTwoPi * u2);
    }

    // Circularly symmetric complex Gaussian with E|h|^2 = 1.
    std::complex<double> complex_fading() {
        double n1, n2;
        normal_pair(n1, n2);
        return {n1 * M_SQRT1_2, n2 * M_SQRT1_2};
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace rl
