#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace faircsb {

// SplitMix64 step: advances *state and returns the next output word.
inline std::uint64_t splitmix64(std::uint64_t* state) {
    std::uint64_t z = (*state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Derives an independent child seed from (base, tags...). Used for
// per-replication streams and the per-(round, arm) environment draws.
inline std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> tags) {
    std::uint64_t s = base;
    std::uint64_t acc = splitmix64(&s);
    for (std::uint64_t tag : tags) {
        s = acc ^ (tag + 0x9e3779b97f4a7c15ULL);
        acc = splitmix64(&s);
    }
    return acc;
}

// Small deterministic PRNG (SplitMix64 core). Identical output on every
// platform for a given seed, which is what the replay tests rely on; the
// standard <random> distributions are implementation-defined and are
// deliberately not used.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() { return splitmix64(&state_); }

    // Uniform on [0, 1).
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on (0, 1]; safe as a log() argument.
    double uniform01_pos() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

    // Uniform over {0, ..., n-1}, n >= 1. Rejection-free modulo bias is
    // negligible for the small n used here, but debias anyway.
    std::int64_t uniform_int(std::int64_t n) {
        const std::uint64_t un = static_cast<std::uint64_t>(n);
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % un;
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return static_cast<std::int64_t>(x % un);
    }

    bool bernoulli(double p) { return uniform01() < p; }

    // Standard normal via Box-Muller (no cached spare, keeps the stream
    // consumption pattern simple).
    double normal() {
        const double u1 = uniform01_pos();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    }

    // Gamma(shape, 1) via Marsaglia-Tsang; shape < 1 handled by boosting.
    double gamma(double shape) {
        if (shape < 1.0) {
            const double u = uniform01_pos();
            return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / (3.0 * std::sqrt(d));
        for (;;) {
            double x = normal();
            double v = 1.0 + c * x;
            if (v <= 0.0) continue;
            v = v * v * v;
            const double u = uniform01_pos();
            const double x2 = x * x;
            if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
            if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    double beta(double a, double b) {
        const double x = gamma(a);
        const double y = gamma(b);
        return x / (x + y);
    }

  private:
    std::uint64_t state_;
};

}  // namespace faircsb
