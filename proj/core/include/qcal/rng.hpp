#pragma once

#include <cmath>
#include <cstdint>

namespace qcal {

// splitmix64: seed expander and stream mixer. Passes through every 64-bit
// state exactly once; used only to derive xoshiro states, never as the
// in-loop generator.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// xoshiro256** with a Marsaglia polar Gaussian on top. Owned generator so
// that "same seed, bit-identical record" holds across compilers and
// standard libraries; std::normal_distribution makes no such promise.
class Rng {
  public:
    Rng() : Rng(0) {}

    explicit Rng(std::uint64_t seed) { reseed(seed); }

    // Independent stream for a (master seed, job index) pair. Mixing the
    // index through splitmix64 twice keeps adjacent indices uncorrelated.
    Rng(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t m = seed;
        std::uint64_t a = splitmix64(m);
        m ^= 0xd1342543de82ef95ULL * (stream + 1);
        std::uint64_t b = splitmix64(m);
        m += stream;
        reseed_words(a, b, splitmix64(m), splitmix64(m));
    }

    void reseed(std::uint64_t seed) {
        std::uint64_t m = seed;
        reseed_words(splitmix64(m), splitmix64(m), splitmix64(m), splitmix64(m));
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on [0, 2pi).
    double uniform_angle() { return uniform() * 6.283185307179586476925286766559; }

    // Standard normal, Marsaglia polar form (no trig; caches the pair).
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        have_spare_ = true;
        return u * m;
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    void reseed_words(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) {
        s_[0] = a;
        s_[1] = b;
        s_[2] = c;
        s_[3] = d;
        // all-zero state is the one forbidden xoshiro seed
        if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[3] = 0x9e3779b97f4a7c15ULL;
        have_spare_ = false;
    }

    std::uint64_t s_[4];
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace qcal
