#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace graphdyn {

// Seedable random source used by every stochastic routine in the library.
// The engine is a plain mt19937_64; all distributions are implemented here
// on top of raw 64-bit draws, so outputs are reproducible for a given seed
// on any platform (std:: distributions do not guarantee that).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Unbiased integer in [0, bound) via rejection.
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t limit = bound * (UINT64_MAX / bound);
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return x % bound;
    }

    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(
                        next_below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    // Uniform in [0, 1) with 53 bits of precision.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    bool bernoulli(double p) { return uniform01() < p; }

    double normal() {
        // Box-Muller; one value per call keeps the draw sequence simple.
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * 3.14159265358979323846 * u2);
    }

    // Marsaglia-Tsang for shape >= 1, boosted otherwise.
    double gamma(double shape) {
        if (shape < 1.0) {
            const double u = uniform01();
            return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform01();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    double beta(double alpha, double bbeta) {
        // Inverse-CDF shortcuts when one shape is 1, ratio of gammas otherwise.
        if (alpha == 1.0) return 1.0 - std::pow(1.0 - uniform01(), 1.0 / bbeta);
        if (bbeta == 1.0) return std::pow(uniform01(), 1.0 / alpha);
        const double x = gamma(alpha);
        const double y = gamma(bbeta);
        return x / (x + y);
    }

    // Derive an independent stream, e.g. one per time step.
    static std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
        // splitmix64 scramble of (seed, stream)
        std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace graphdyn
