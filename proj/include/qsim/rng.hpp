// Deterministic seeded randomness.
//
// One Rng per logical consumer (an observer, a trial, an environment model).
// mt19937_64 output is pinned by the standard, and uniform doubles are
// derived by hand, so sequences are reproducible across platforms.
// Substreams are derived by splitmix-mixing (seed, stream index), which keeps
// per-trial and per-observer streams independent of each other.

#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>

namespace qsim {

std::uint64_t splitmix64(std::uint64_t x);

/// Independent child seed for (seed, stream index).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(seed) + 0x9e3779b97f4a7c15ull * (stream + 1);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(splitmix64(seed)) {}

    static Rng substream(std::uint64_t seed, std::uint64_t stream) {
        return Rng(derive_seed(seed, stream));
    }

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller; draws exactly two uniforms per call.
    double normal();

    /// Index sampled with probability weights[i] / Σ weights (inverse CDF).
    /// Consumes exactly one uniform.
    std::size_t pick(std::span<const double> weights);

    bool bernoulli(double p) { return uniform() < p; }

    /// Engine state in the canonical textual form of operator<<.
    std::string state_string() const;

private:
    std::mt19937_64 gen_;
};

}  // namespace qsim
