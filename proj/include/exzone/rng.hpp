#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace exzone {

// splitmix64 step; used for seeding and for deriving independent stream ids.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Deterministic stream id from a master seed plus up to three tags.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a = 0,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
    std::uint64_t s = master;
    std::uint64_t z = splitmix64(s);
    s ^= a + 0x9E3779B97F4A7C15ull;
    z ^= splitmix64(s);
    s ^= b + 0xD1B54A32D192ED03ull;
    z ^= splitmix64(s);
    s ^= c + 0x8CB92BA72F3D8DD7ull;
    z ^= splitmix64(s);
    return z;
}

// xoshiro256++ with hand-rolled uniform/normal/Poisson samplers.  The standard
// library distributions are implementation-defined, which would break the
// bit-identical-output contract across toolchains.
class Rng {
  public:
    explicit Rng(std::uint64_t seed = 0) {
        std::uint64_t s = seed;
        for (auto& word : state_) word = splitmix64(s);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // uniform in [0, 1)
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // standard normal, Box-Muller with cached spare
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double mag = std::sqrt(-2.0 * std::log(u1));
        spare_ = mag * std::sin(6.283185307179586477 * u2);
        have_spare_ = true;
        return mag * std::cos(6.283185307179586477 * u2);
    }

    // CN(0,1): unit-variance circularly-symmetric complex Gaussian
    std::complex<double> cnormal() {
        constexpr double inv_sqrt2 = 0.7071067811865475244;
        const double re = normal();
        const double im = normal();
        return {re * inv_sqrt2, im * inv_sqrt2};
    }

    // Exact Poisson sampling.  Knuth's product method per chunk; chunking keeps
    // exp(-mean) representable and is exact by infinite divisibility.
    long poisson(double mean) {
        long total = 0;
        while (mean > 256.0) {
            total += poisson_knuth(256.0);
            mean -= 256.0;
        }
        return total + poisson_knuth(mean);
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    long poisson_knuth(double mean) {
        if (mean <= 0.0) return 0;
        const double limit = std::exp(-mean);
        long k = 0;
        double prod = 1.0;
        do {
            ++k;
            prod *= uniform();
        } while (prod > limit);
        return k - 1;
    }

    std::uint64_t state_[4] = {};
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace exzone
