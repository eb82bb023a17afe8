#pragma once

#include <cstdint>
#include <initializer_list>

namespace bpdi {

// Counter-based pseudo-random generator: output i of a stream is
// splitmix64(key + i * golden), so a stream is fully named by its key and
// draws are independent of how any other stream is consumed. Stream keys are
// derived by folding tag words into a seed, which gives reproducible
// per-task streams under any parallel schedule.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t key) : key_(key) {}

    static std::uint64_t mix(std::uint64_t z) noexcept {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ull;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBull;
        z ^= z >> 31;
        return z;
    }

    static std::uint64_t derive_key(std::uint64_t seed,
                                    std::initializer_list<std::uint64_t> tags) noexcept {
        std::uint64_t key = mix(seed + kGolden);
        for (std::uint64_t t : tags) {
            key = mix(key + kGolden + t);
        }
        return key;
    }

    std::uint64_t next_u64() noexcept {
        counter_ += kGolden;
        return mix(key_ + counter_);
    }

    // Uniform in [0, 1), 53-bit resolution.
    double next_double() noexcept {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) noexcept {
        return lo + (hi - lo) * next_double();
    }

    // Symmetric sign draw: +1 or -1 with equal probability.
    int next_sign() noexcept {
        return (next_u64() >> 63) ? 1 : -1;
    }

private:
    static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

} // namespace bpdi
