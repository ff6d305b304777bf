#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string_view>
#include <vector>

namespace spqcnn {

// Splittable deterministic RNG. Streams are derived from (seed, tag, indices)
// so parallel or reordered consumers never share a stream. The generator is
// splitmix64; normal/sphere sampling is done here rather than with
// std::*_distribution because those are implementation-defined and this
// project promises byte-identical outputs across runs.
class Rng {
  public:
    explicit Rng(uint64_t seed) : state_(mix(seed + kGolden)) {}

    static Rng keyed(uint64_t seed, std::string_view tag, uint64_t a = 0, uint64_t b = 0) {
        uint64_t s = mix(seed + kGolden);
        s = mix(s ^ fnv1a(tag));
        s = mix(s ^ (a + kGolden));
        s = mix(s ^ (b + kGolden));
        Rng r(0);
        r.state_ = s;
        r.have_normal_ = false;
        return r;
    }

    uint64_t next_u64() {
        state_ += kGolden;
        return mix(state_);
    }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, m), rejection-sampled to avoid modulo bias.
    uint64_t uniform_int(uint64_t m) {
        uint64_t threshold = (0 - m) % m;
        for (;;) {
            uint64_t r = next_u64();
            if (r >= threshold) return r % m;
        }
    }

    // Standard normal via Box-Muller; pairs are generated and cached.
    double normal() {
        if (have_normal_) {
            have_normal_ = false;
            return cached_normal_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = kTwoPi * u2;
        cached_normal_ = r * std::sin(a);
        have_normal_ = true;
        return r * std::cos(a);
    }

    // Uniform on the unit sphere (Marsaglia rejection).
    std::array<double, 3> sphere() {
        for (;;) {
            double v1 = uniform(-1.0, 1.0);
            double v2 = uniform(-1.0, 1.0);
            double s = v1 * v1 + v2 * v2;
            if (s >= 1.0 || s == 0.0) continue;
            double f = std::sqrt(1.0 - s);
            return {2.0 * v1 * f, 2.0 * v2 * f, 1.0 - 2.0 * s};
        }
    }

    // Fisher-Yates shuffle.
    template <typename T> void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = uniform_int(i);
            std::swap(v[i - 1], v[j]);
        }
    }

  private:
    static constexpr uint64_t kGolden = 0x9E3779B97F4A7C15ull;
    static constexpr double kTwoPi = 6.28318530717958647692;

    static uint64_t mix(uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ull;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBull;
        z ^= z >> 31;
        return z;
    }

    static uint64_t fnv1a(std::string_view s) {
        uint64_t h = 0xCBF29CE484222325ull;
        for (char c : s) {
            h ^= uint64_t(uint8_t(c));
            h *= 0x100000001B3ull;
        }
        return h;
    }

    uint64_t state_;
    bool have_normal_ = false;
    double cached_normal_ = 0.0;
};

} // namespace spqcnn
