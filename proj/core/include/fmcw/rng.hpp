#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string_view>

namespace fmcw {

// splitmix64; used to derive independent stream seeds from one scenario seed.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t fnv1a64(std::string_view s, std::uint64_t h = 0xcbf29ce484222325ULL) {
    for (char c : s) {
        h ^= static_cast<std::uint64_t>(static_cast<unsigned char>(c));
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Deterministic random stream. mt19937_64 is fully specified by the standard,
// and the uniform/gaussian transforms below are fixed here, so identical seeds
// give identical sequences on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    // uniform in [0, 1)
    double uniform() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    // uniform in [-w, w)
    double uniform_sym(double w) { return (2.0 * uniform() - 1.0) * w; }

    // standard normal via Box-Muller; consumes exactly two engine draws.
    double gaussian() {
        double u1 = uniform();
        double u2 = uniform();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * std::numbers::pi * u2);
    }

    std::uint64_t raw() { return eng_(); }

private:
    std::mt19937_64 eng_;
};

// Stream derivation: every consumer of randomness names its stream by tag and
// indices, so draws never depend on the order modules run in.
inline std::uint64_t stream_seed(std::uint64_t scenario_seed, std::string_view tag,
                                 std::uint64_t a = 0, std::uint64_t b = 0) {
    std::uint64_t h = fnv1a64(tag);
    h = splitmix64(h ^ splitmix64(scenario_seed));
    h = splitmix64(h ^ (a * 0x9e3779b97f4a7c15ULL + 1));
    h = splitmix64(h ^ (b * 0xc2b2ae3d27d4eb4fULL + 1));
    return h;
}

inline Rng stream(std::uint64_t scenario_seed, std::string_view tag,
                  std::uint64_t a = 0, std::uint64_t b = 0) {
    return Rng(stream_seed(scenario_seed, tag, a, b));
}

} // namespace fmcw
