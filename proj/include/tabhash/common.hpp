#pragma once

// Shared plumbing: error taxonomy, the seedable PRNG used everywhere, and
// version constants embedded in experiment output.

#include <cstdint>
#include <stdexcept>
#include <string>

namespace tabhash {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

// Invalid experiment/function configuration (bad widths, bad flag combos).
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input data (duplicate keys where distinct required, etc.).
struct input_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Value outside the declared domain (character out of range, ...).
struct domain_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A documented enumeration cap or budget was exceeded.
struct resource_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// SplitMix64 (Steele, Lea, Flood 2014). Chosen as the table-fill and trial
// PRNG because the algorithm is tiny, bit-exact across platforms, and fully
// determined by its 64-bit seed.
class SplitMix64 {
public:
    explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    constexpr std::uint64_t next() noexcept {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform-enough draw in [0, bound); bound is tiny in all uses here.
    constexpr std::uint64_t below(std::uint64_t bound) noexcept {
        return next() % bound;
    }

private:
    std::uint64_t state_;
};

// One SplitMix64 step as a pure function of x.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    return SplitMix64(x).next();
}

// Per-trial seed derivation: master seed XOR splitmix(trial index).
constexpr std::uint64_t trial_seed(std::uint64_t master, std::uint64_t trial) noexcept {
    return master ^ splitmix64(trial);
}

}  // namespace tabhash
