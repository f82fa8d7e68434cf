#pragma once

#include <cstdint>
#include <vector>

#include "meshwm/geometry.hpp"

namespace meshwm {

/// One point of the dithered two-symbol codebook
///   u = z * Q + l * Q/2 + t,  z integer, l in {0,1}, clipped to u >= 0.
/// half_index c enumerates codewords in value order: u = c * Q/2 + t,
/// with l = c mod 2 and z = floor(c / 2).
struct Codeword {
    double value = 0.0;
    int bit = 0;
    long long half_index = 0;
};

/// Keyed dither: 'count' i.i.d. values uniform in [0, q_step), drawn from
/// SplitMix64 seeded with key1. Bit-exact across platforms.
std::vector<double> derive_dither(std::uint64_t key1, int count, double q_step);

/// Nearest codeword to 'value' with the bit free. Exact midpoint ties
/// resolve to the smaller codeword.
Codeword nearest_codeword(double value, double q_step, double dither);

/// Nearest codeword carrying the given bit. Same tie rule.
Codeword nearest_codeword(double value, int bit, double q_step, double dither);

/// Distortion-compensated quantization: value + gamma * (codeword - value).
double quantize_value(double value, double target_codeword, double gamma);

/// Keyed bit mask for a codebook cell: the payload bit carried by cell z is
/// the raw codeword label XOR cell_mask(key1, z). Without it a wrong key
/// would merely rotate the dithered lattice, reproducing the payload up to a
/// cyclic shift and complement; the per-cell mask makes every wrong-key
/// decode an independent coin flip while leaving codeword positions, and
/// with them all decode margins, untouched.
int cell_mask(std::uint64_t key1, long long cell);

/// Smallest admissible half index (codewords are clipped to u >= 0).
long long min_half_index(double q_step, double dither);

enum class QStepMode { Fixed, Adaptive };

/// Quantization step. Fixed mode returns q_fixed (the secret key2).
/// Adaptive mode returns N_av / lambda where N_av is the mean radial vertex
/// norm of the whole mesh: a length-dimension statistic that scales exactly
/// with the mesh, is unbiased under additive noise to second order, and
/// shrinks together with the norms under smoothing, so the codebook the
/// extractor rebuilds stays aligned with the one the embedder used.
/// Throws ZeroNormals when the mesh collapses to its center of gravity.
double quantization_step(const MeshGeometry& geometry, QStepMode mode, double q_fixed,
                         double lambda);

}  // namespace meshwm
