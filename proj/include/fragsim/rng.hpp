#pragma once
#include <cmath>
#include <cstdint>
#include <random>

namespace fragsim {

// splitmix64 finalizer; used to derive independent seeds from (master, tags).
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0,
                                 std::uint64_t c = 0) {
    std::uint64_t s = mix64(master);
    s = mix64(s ^ a);
    s = mix64(s ^ b);
    s = mix64(s ^ c);
    return s;
}

// Seeded generator with explicit, self-contained sampling routines so that
// draw sequences are identical across standard libraries and platforms.
// Draw counts are tracked per family for audit checks.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // Strictly inside (0,1); safe as a log() argument.
    double uniform01() { return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53; }

    // Uniform integer on the closed range [lo, hi].
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        ++uniform_count_;
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(gen_() % span);
    }

    // Box-Muller, one variate per call (two underlying uniforms).
    double normal(double mean, double stddev) {
        ++normal_count_;
        const double u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        return mean + stddev * r * std::cos(2.0 * M_PI * u2);
    }

    // Exponential with the given mean; strictly positive.
    double exponential(double mean) {
        ++exponential_count_;
        return -mean * std::log(uniform01());
    }

    std::uint64_t normal_draws() const { return normal_count_; }
    std::uint64_t uniform_draws() const { return uniform_count_; }
    std::uint64_t exponential_draws() const { return exponential_count_; }

private:
    std::mt19937_64 gen_;
    std::uint64_t normal_count_ = 0;
    std::uint64_t uniform_count_ = 0;
    std::uint64_t exponential_count_ = 0;
};

} // namespace fragsim
