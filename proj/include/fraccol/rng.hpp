#pragma once

#include <cassert>
#include <cstdint>
#include <random>
#include <span>

namespace fraccol {

// Deterministic RNG wrapper. mt19937_64 is fully specified by the standard;
// the distribution draws below are hand-rolled because std distributions are
// implementation-defined and we need byte-identical runs across toolchains.
class Rng {
public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    uint64_t next_u64() { return engine_(); }

    // Uniform integer in [0, n), unbiased via rejection.
    int uniform_int(int n) {
        assert(n > 0);
        uint64_t bound = uint64_t(n);
        uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        uint64_t x;
        do { x = engine_(); } while (x >= limit);
        return int(x % bound);
    }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform_real() {
        return double(engine_() >> 11) * 0x1.0p-53;
    }

    // Draw an index proportionally to nonnegative weights; total must be > 0.
    int discrete(std::span<const double> weights, double total) {
        assert(total > 0.0);
        double r = uniform_real() * total;
        double acc = 0.0;
        int last = -1;
        for (size_t i = 0; i < weights.size(); ++i) {
            if (weights[i] <= 0.0) continue;
            acc += weights[i];
            last = int(i);
            if (r < acc) return last;
        }
        return last;  // numeric slack lands on the final positive weight
    }

private:
    std::mt19937_64 engine_;
};

// Derives independent stream seeds from a base seed (splitmix64 finalizer).
inline uint64_t mix_seed(uint64_t base, uint64_t stream) {
    uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace fraccol
