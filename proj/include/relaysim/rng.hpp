#pragma once

#include <cstdint>
#include <random>

namespace relaysim {

// splitmix64 step (Vigna). Used only to derive sub-stream seeds from the
// master seed, so that topology / demand / search / shadowing draws can be
// varied independently without perturbing one another.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

enum class Stream : std::uint64_t {
    Topology = 1,
    Demand = 2,
    Search = 3,
    Shadowing = 4,
    Sweep = 5,
};

// Documented split function: sub-seed = splitmix64 chain over the master
// seed and a stream tag (plus an optional index for per-point streams).
inline std::uint64_t derive_seed(std::uint64_t master, Stream stream, std::uint64_t index = 0) {
    std::uint64_t s = master;
    std::uint64_t a = splitmix64(s);
    s = a ^ (static_cast<std::uint64_t>(stream) * 0x9e3779b97f4a7c15ULL);
    std::uint64_t b = splitmix64(s);
    s = b ^ (index * 0xbf58476d1ce4e5b9ULL);
    return splitmix64(s);
}

// Deterministic RNG: mt19937_64 (bit-exact sequence mandated by the
// standard) with hand-rolled distributions, because the std distribution
// objects are implementation-defined and would break byte-identical
// replays across standard libraries.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // 53-bit uniform in [0, 1)
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Unbiased integer in [0, n) via rejection.
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) return 0;
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

    std::int64_t int_in(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    // Marsaglia polar method; avoids trig so the only libm calls are
    // sqrt/log. One value per call, the pair's second half is discarded to
    // keep the draw count independent of caller state.
    double normal() {
        for (;;) {
            const double u = 2.0 * uniform01() - 1.0;
            const double v = 2.0 * uniform01() - 1.0;
            const double s = u * u + v * v;
            if (s > 0.0 && s < 1.0) {
                return u * std::sqrt(-2.0 * std::log(s) / s);
            }
        }
    }

  private:
    std::mt19937_64 engine_;
};

}  // namespace relaysim
