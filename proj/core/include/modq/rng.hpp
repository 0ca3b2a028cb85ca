#pragma once

// Seedable, splittable random stream used by every stochastic operation.
// The engine is std::mt19937_64 (output fully specified by the standard) and
// exponential variates are drawn by explicit inverse CDF, so a given seed
// produces bit-identical streams across platforms and toolchains.

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

namespace modq {

// SplitMix64 finalizer; used to spread user seeds and derive child streams.
inline constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class RandomStream {
  public:
    explicit RandomStream(std::uint64_t seed) : engine_(mix64(seed)) {}

    // Independent stream for replication `index` under a common user seed.
    static RandomStream child(std::uint64_t seed, std::uint64_t index) {
        return RandomStream(mix64(seed) ^ mix64(0xda942042e4dd58b5ULL * (index + 1)));
    }

    // Uniform on the open interval (0,1); never 0 or 1.
    double uniform01() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1p-53;
    }

    // Exp(rate). rate == 0 is a clock that never fires: returns +infinity.
    double exponential(double rate) {
        if (rate <= 0.0) return std::numeric_limits<double>::infinity();
        return -std::log(uniform01()) / rate;
    }

    bool bernoulli(double p) { return uniform01() < p; }

    std::uint64_t raw() { return engine_(); }

  private:
    std::mt19937_64 engine_;
};

}  // namespace modq
