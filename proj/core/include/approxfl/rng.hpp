#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace approxfl {

// splitmix64 finalizer; full avalanche on 64-bit inputs.
inline uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Derives an independent stream seed from a master seed and a tag tuple.
// Streams derived from distinct tag tuples are uncorrelated, so per-client /
// per-round / per-codeword work can run in any order with identical results.
template <typename... Tags>
uint64_t derive_seed(uint64_t master, Tags... tags) {
    uint64_t h = mix64(master);
    ((h = mix64(h ^ static_cast<uint64_t>(tags))), ...);
    return h;
}

// Named sub-stream tags used across the simulator.
enum class Stream : uint64_t {
    train_data = 0x01,
    test_data = 0x02,
    partition = 0x03,
    model_init = 0x04,
    batch = 0x05,
    link = 0x06,
    ber = 0x07,
    bounds = 0x08,
};

inline uint64_t derive_seed(uint64_t master, Stream s) {
    return derive_seed(master, static_cast<uint64_t>(s));
}
template <typename... Tags>
uint64_t derive_seed(uint64_t master, Stream s, Tags... tags) {
    return derive_seed(master, static_cast<uint64_t>(s), tags...);
}

// Deterministic RNG: mt19937_64 core with hand-rolled uniform/Gaussian
// transforms so the produced sequence does not depend on the standard
// library's distribution internals.
class Rng {
  public:
    explicit Rng(uint64_t seed) : gen_(mix64(seed)) {}

    uint64_t next_u64() { return gen_(); }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in (0, 1]; safe as a log() argument.
    double uniform01_open() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // N(0, 1) via Box-Muller; caches the second output.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double r = std::sqrt(-2.0 * std::log(uniform01_open()));
        double theta = 2.0 * M_PI * uniform01();
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

    // Circularly symmetric complex Gaussian CN(0, var).
    std::complex<double> cgaussian(double var) {
        double s = std::sqrt(var / 2.0);
        double re = s * gaussian();
        double im = s * gaussian();
        return {re, im};
    }

    uint32_t bit() { return static_cast<uint32_t>(next_u64() >> 63); }

    uint64_t below(uint64_t n) { return next_u64() % n; }

    template <class It>
    void shuffle(It first, It last) {
        auto n = static_cast<uint64_t>(last - first);
        for (uint64_t i = n; i > 1; --i) {
            uint64_t j = below(i);
            std::swap(first[i - 1], first[j]);
        }
    }

  private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace approxfl
