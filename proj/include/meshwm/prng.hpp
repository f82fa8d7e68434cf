#pragma once

#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "meshwm/vec3.hpp"

namespace meshwm {

// SplitMix64 (Steele, Lea, Flood 2014). Chosen because its output is a pure
// integer recurrence: the same seed produces the same stream on every
// platform, which keyed dither generation and attack reproducibility require.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform double in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n). n must be positive.
    std::uint64_t next_below(std::uint64_t n) {
        // Modulo bias is < 2^-53 for the n used here (mesh-sized); acceptable.
        return next_u64() % n;
    }

    // Uniform in [lo, hi).
    double next_in(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    // Uniform direction via rejection sampling from the cube; avoids
    // transcendental functions so streams stay reproducible.
    Vec3 next_unit_vector() {
        for (;;) {
            Vec3 v{next_in(-1.0, 1.0), next_in(-1.0, 1.0), next_in(-1.0, 1.0)};
            const double n2 = v.norm2();
            if (n2 > 1e-12 && n2 <= 1.0) return v / std::sqrt(n2);
        }
    }

    // Uniform random rotation from a uniform unit quaternion.
    Mat3 next_rotation() {
        double q[4];
        for (;;) {
            double n2 = 0.0;
            for (double& c : q) {
                c = next_in(-1.0, 1.0);
                n2 += c * c;
            }
            if (n2 > 1e-12 && n2 <= 1.0) {
                const double inv = 1.0 / std::sqrt(n2);
                for (double& c : q) c *= inv;
                break;
            }
        }
        const double w = q[0], x = q[1], y = q[2], z = q[3];
        Mat3 r;
        r.m[0][0] = 1 - 2 * (y * y + z * z);
        r.m[0][1] = 2 * (x * y - w * z);
        r.m[0][2] = 2 * (x * z + w * y);
        r.m[1][0] = 2 * (x * y + w * z);
        r.m[1][1] = 1 - 2 * (x * x + z * z);
        r.m[1][2] = 2 * (y * z - w * x);
        r.m[2][0] = 2 * (x * z - w * y);
        r.m[2][1] = 2 * (y * z + w * x);
        r.m[2][2] = 1 - 2 * (x * x + y * y);
        return r;
    }

    // Fisher-Yates permutation of {0, ..., n-1}.
    std::vector<int> next_permutation_of(int n) {
        std::vector<int> p(static_cast<std::size_t>(n));
        std::iota(p.begin(), p.end(), 0);
        for (int i = n - 1; i > 0; --i) {
            const auto j = static_cast<int>(next_below(static_cast<std::uint64_t>(i) + 1));
            std::swap(p[static_cast<std::size_t>(i)], p[static_cast<std::size_t>(j)]);
        }
        return p;
    }

  private:
    std::uint64_t state_;
};

// Stable seed mixing for deriving per-cell seeds from a master seed.
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    SplitMix64 g(a ^ (b + 0x9E3779B97F4A7C15ULL + (a << 6) + (a >> 2)));
    return g.next_u64();
}

// FNV-1a, used to fold strings (mesh ids, attack specs) into seeds.
inline std::uint64_t hash_string(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (const char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace meshwm
