#pragma once

#include <cstdint>

namespace zsram {

// Counter-based generator: value depends only on (seed, counter), so streams
// can be split across workers without coordination.
struct CounterRng {
    std::uint64_t seed;

    explicit CounterRng(std::uint64_t s) : seed(s) {}

    static std::uint64_t mix(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    std::uint64_t at(std::uint64_t counter) const {
        return mix(seed ^ mix(counter + 0x6a09e667f3bcc909ULL));
    }

    // uniform in [0, bound)
    std::uint64_t bounded(std::uint64_t counter, std::uint64_t bound) const {
        return at(counter) % bound;
    }
};

// Small sequential PRNG for test instance generation.
struct SeqRng {
    std::uint64_t state;
    explicit SeqRng(std::uint64_t s) : state(s ? s : 1) {}
    std::uint64_t next() {
        state = CounterRng::mix(state);
        return state;
    }
    std::uint64_t next_below(std::uint64_t bound) { return next() % bound; }
};

} // namespace zsram
