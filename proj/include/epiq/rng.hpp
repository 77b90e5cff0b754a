#pragma once

#include <cstdint>
#include <random>

namespace epiq {

// Counter-based stream derivation: every (master seed, label...) tuple maps to
// an independent deterministic generator, so trajectory results do not depend
// on execution order or parallelism degree.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : gen_(seed) {}

    // Derive a child stream from a master seed and up to two labels
    // (e.g. day index and trajectory index) via splitmix64 mixing.
    static RandomStream derive(std::uint64_t master, std::uint64_t label_a,
                               std::uint64_t label_b = 0) {
        std::uint64_t s = mix(master + 0x9e3779b97f4a7c15ULL * (label_a + 1));
        s = mix(s ^ (0xbf58476d1ce4e5b9ULL * (label_b + 1)));
        return RandomStream(s);
    }

    double uniform() { return dist_(gen_); }

    std::uint64_t next_u64() { return gen_(); }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::mt19937_64 gen_;
    std::uniform_real_distribution<double> dist_{0.0, 1.0};
};

} // namespace epiq
