#ifndef SANDCAST_RNG_HPP
#define SANDCAST_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace sandcast {

// Deterministic draws. std::uniform_real_distribution is implementation
// defined, so the u64 -> [0,1) mapping is done by hand: results are
// bit-identical across platforms for a fixed seed.

class UniformRng {
public:
    explicit UniformRng(std::uint64_t seed) : gen_(seed) {}

    // in [0, 1)
    double next01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next01(); }

    std::uint64_t next_u64() { return gen_(); }

private:
    std::mt19937_64 gen_;
};

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}
} // namespace detail

// Counter-based normal draw keyed on (seed, a, b, c): the value depends only
// on the key, never on call order, so parallel voxel loops stay deterministic.
inline double keyed_normal(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                           std::uint64_t c) {
    std::uint64_t h = detail::splitmix64(seed ^ detail::splitmix64(a ^ detail::splitmix64(b ^ detail::splitmix64(c))));
    std::uint64_t h2 = detail::splitmix64(h);
    // u1 in (0,1], u2 in [0,1)
    double u1 = (static_cast<double>(h >> 11) + 1.0) * 0x1.0p-53;
    double u2 = static_cast<double>(h2 >> 11) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

} // namespace sandcast

#endif
