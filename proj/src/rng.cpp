#include "heis/rng.hpp"

namespace heis {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::int64_t> tags) {
    std::uint64_t h = splitmix64(seed);
    for (auto tag : tags) h = splitmix64(h ^ splitmix64(static_cast<std::uint64_t>(tag) + 0x632be59bd9b4e019ULL));
    return h;
}

std::uint64_t Rng::index(std::uint64_t count) {
    // rejection to avoid modulo bias
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % count;
    std::uint64_t v;
    do v = engine_(); while (v >= limit);
    return v % count;
}

}  // namespace heis
