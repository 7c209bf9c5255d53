#pragma once

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace fskjcr {

// Mixes a master seed with a key path into an independent engine seed, so
// every (seed, key...) tuple owns its own substream regardless of how work is
// scheduled across threads.
std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> keys);

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    static Rng substream(std::uint64_t seed, std::initializer_list<std::uint64_t> keys)
    {
        return Rng(derive_seed(seed, keys));
    }

    std::uint64_t next() { return engine_(); }

    // Uniform on [0, n).
    std::uint64_t uniform_index(std::uint64_t n)
    {
        return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_);
    }
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
    double normal() { return normal_(engine_); }

    // Circularly symmetric complex Gaussian with E|z|^2 = variance.
    std::complex<double> complex_normal(double variance = 1.0);

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_;
};

}  // namespace fskjcr
