#include "meshwm/scs.hpp"

#include <algorithm>
#include <cmath>

#include "meshwm/errors.hpp"
#include "meshwm/prng.hpp"

namespace meshwm {

std::vector<double> derive_dither(std::uint64_t key1, int count, double q_step) {
    SplitMix64 gen(key1);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(std::max(count, 0)));
    for (int i = 0; i < count; ++i) out.push_back(gen.next_double() * q_step);
    return out;
}

long long min_half_index(double q_step, double dither) {
    // Smallest c with c * Q/2 + t >= 0. Dither lies in [0, Q), so this is
    // 0 or -1; computed generically anyway.
    return static_cast<long long>(std::ceil(-dither / (q_step * 0.5)));
}

namespace {

Codeword make_codeword(long long c, double q_step, double dither) {
    Codeword cw;
    cw.half_index = c;
    cw.value = static_cast<double>(c) * (q_step * 0.5) + dither;
    cw.bit = static_cast<int>(((c % 2) + 2) % 2);
    return cw;
}

// Picks the candidate nearer to value; an exact distance tie goes to the
// smaller codeword.
Codeword nearer_of(const Codeword& a, const Codeword& b, double value) {
    const double da = std::fabs(value - a.value);
    const double db = std::fabs(value - b.value);
    if (da < db) return a;
    if (db < da) return b;
    return a.value <= b.value ? a : b;
}

}  // namespace

Codeword nearest_codeword(double value, double q_step, double dither) {
    const long long c_min = min_half_index(q_step, dither);
    const double y = (value - dither) / (q_step * 0.5);
    long long c0 = static_cast<long long>(std::floor(y));
    if (c0 < c_min) c0 = c_min;
    const Codeword lo = make_codeword(c0, q_step, dither);
    const Codeword hi = make_codeword(c0 + 1, q_step, dither);
    return nearer_of(lo, hi, value);
}

Codeword nearest_codeword(double value, int bit, double q_step, double dither) {
    const long long c_min = min_half_index(q_step, dither);
    // Codewords carrying 'bit' sit at c = 2z + bit, spaced Q apart.
    const double offset = dither + static_cast<double>(bit) * q_step * 0.5;
    long long z0 = static_cast<long long>(std::floor((value - offset) / q_step));
    // Smallest z with 2z + bit >= c_min.
    const auto z_min =
        static_cast<long long>(std::ceil(static_cast<double>(c_min - bit) / 2.0));
    if (z0 < z_min) z0 = z_min;
    const Codeword lo = make_codeword(2 * z0 + bit, q_step, dither);
    const Codeword hi = make_codeword(2 * (z0 + 1) + bit, q_step, dither);
    return nearer_of(lo, hi, value);
}

double quantize_value(double value, double target_codeword, double gamma) {
    return value + gamma * (target_codeword - value);
}

int cell_mask(std::uint64_t key1, long long cell) {
    SplitMix64 gen(key1 ^ (static_cast<std::uint64_t>(cell) * 0x9E3779B97F4A7C15ULL +
                           0xD1B54A32D192ED03ULL));
    return static_cast<int>(gen.next_u64() & 1ULL);
}

double quantization_step(const MeshGeometry& geometry, QStepMode mode, double q_fixed,
                         double lambda) {
    if (mode == QStepMode::Fixed) return q_fixed;
    if (geometry.radial_norms.empty()) throw ZeroNormals("adaptive step needs vertices");
    std::vector<double> norms = geometry.radial_norms;
    // Ascending summation keeps the mean bit-identical under any storage order.
    std::sort(norms.begin(), norms.end());
    double sum = 0.0;
    for (const double x : norms) sum += x;
    const double n_av = sum / static_cast<double>(norms.size());
    if (n_av <= 0.0) throw ZeroNormals("mesh has zero radial extent");
    return n_av / lambda;
}

}  // namespace meshwm
