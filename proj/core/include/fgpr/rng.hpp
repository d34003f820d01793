#pragma once

#include <cstdint>
#include <random>

namespace fgpr {

// Deterministic random source. mt19937_64 has a standard-mandated output
// sequence, and the bounded draw below avoids std::uniform_int_distribution
// (whose algorithm is implementation-defined), so identical seeds produce
// identical streams on every platform.
class rng {
public:
    explicit rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next() { return eng_(); }

    // Unbiased draw from [0, n) by multiply-shift with rejection.
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) return 0;
        std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            unsigned __int128 m = static_cast<unsigned __int128>(eng_()) * n;
            if (static_cast<std::uint64_t>(m) >= threshold)
                return static_cast<std::uint64_t>(m >> 64);
        }
    }

    double unit() { return (eng_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 eng_;
};

// splitmix64 finalizer; used to derive independent per-task seeds from a
// master seed so results do not depend on how work is scheduled.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace fgpr
