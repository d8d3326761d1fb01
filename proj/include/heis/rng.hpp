#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace heis {

std::uint64_t splitmix64(std::uint64_t x);

// Stream key from a seed and any number of integer tags (shell index, sample id, ...).
std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::int64_t> tags);

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    Rng(std::uint64_t seed, std::initializer_list<std::int64_t> tags) : engine_(derive_seed(seed, tags)) {}

    // 53-bit uniform in [0,1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    std::uint64_t bits() { return engine_(); }
    // Uniform index in [0, count).
    std::uint64_t index(std::uint64_t count);

private:
    std::mt19937_64 engine_;
};

}  // namespace heis
