#pragma once

#include <cmath>
#include <cstdint>

namespace fpr {

/// splitmix64 (Steele, Lea, Flood 2014). Deterministic across platforms,
/// cheap to split by seed derivation, and simple enough to document in a
/// run report, which is all the harness needs.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller; pairs are drawn lazily.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.28318530717958647692 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    static constexpr const char* name() { return "splitmix64+box-muller"; }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

/// Derives an independent stream seed from a base seed and tags, so the
/// grid cells of an experiment get decoupled deterministic streams.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag) {
    SplitMix64 mix(base ^ (0xA0761D6478BD642Full ^ tag * 0xE7037ED1A0B428DBull));
    return mix.next_u64();
}

template <typename... Tags>
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag, Tags... rest) {
    return derive_seed(derive_seed(base, tag), static_cast<std::uint64_t>(rest)...);
}

}  // namespace fpr
