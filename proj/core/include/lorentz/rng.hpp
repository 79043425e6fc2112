#pragma once

#include <cstdint>
#include <random>

namespace lorentz {

/// SplitMix64 finalizer; used to derive independent sub-stream seeds.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seed of the sub-stream (seed, worker/task id, purpose tag).
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t task, std::uint64_t tag = 0) {
    return mix64(mix64(mix64(seed) ^ task) ^ (tag * 0xd1b54a32d192ed03ULL));
}

/// Random stream with platform-independent draws. The std distributions are
/// implementation-defined, which would break byte-reproducible CSV output
/// across standard libraries, so the few draws we need are spelled out here.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : engine_(seed) {}
    RngStream(std::uint64_t seed, std::uint64_t task, std::uint64_t tag = 0)
        : engine_(derive_seed(seed, task, tag)) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on the open interval (0, 1).
    double uniform_open() {
        double u;
        do {
            u = uniform();
        } while (u == 0.0);
        return u;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    bool coin() { return (engine_() >> 63) != 0; }

private:
    std::mt19937_64 engine_;
};

} // namespace lorentz
