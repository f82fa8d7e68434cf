#pragma once

#include <cstdint>
#include <string>

#include "meshwm/mesh.hpp"

namespace meshwm {

/// Binary random noise: every coordinate of every vertex moves by +A or -A,
/// A = amplitude * mean radial norm, with signs drawn from the seeded
/// generator (vertex order, axes x,y,z). Connectivity is untouched.
Mesh add_noise(const Mesh& mesh, double amplitude, std::uint64_t seed);

/// Laplacian (umbrella) smoothing: per iteration, simultaneously
/// v <- v + factor * (mean of 1-ring neighbors - v).
Mesh smooth_laplacian(const Mesh& mesh, int iterations, double factor);

/// Uniform per-axis grid quantization over the bounding box with 2^bits
/// levels. Axes with zero extent pass through unchanged.
Mesh quantize_coords(const Mesh& mesh, int bits);

/// v <- scale * R * v + translation. Throws InvalidRotation when R is not
/// orthonormal (Frobenius defect >= 1e-9).
Mesh similarity_transform(const Mesh& mesh, const Mat3& rotation, double scale,
                          const Vec3& translation);

/// Seeded random similarity: uniform random rotation, log-uniform scale in
/// [0.5, 2], translation uniform in +-0.5 bbox_diag per axis.
Mesh random_similarity(const Mesh& mesh, std::uint64_t seed);

/// File attack: random vertex permutation (indices remapped), faces
/// shuffled, every face triple rotated. Pure storage-order change.
Mesh reorder_elements(const Mesh& mesh, std::uint64_t seed);

enum class SubdivisionScheme { Midpoint, Loop, Sqrt3 };

/// One or more rounds of triangle subdivision. Midpoint is interpolating
/// (original vertices untouched), Loop uses the standard 3/8-1/8 stencils
/// with beta(n) vertex re-weighting, Sqrt3 inserts face centroids, flips
/// original interior edges and relaxes original vertices.
/// Throws NonManifoldEdge if an edge has more than two incident faces.
Mesh subdivide(const Mesh& mesh, SubdivisionScheme scheme, int iterations);

/// Removes the round(fraction * n) vertices farthest along a seeded random
/// plane normal through the center of gravity, plus their faces; the rest is
/// compacted. Throws EmptyResult if fewer than 4 vertices would remain.
Mesh crop(const Mesh& mesh, double fraction, std::uint64_t seed);

/// Parsed form of the CLI attack grammar:
///   noise:A   smooth:IT:F   quant:BITS   similarity:SEED   reorder:SEED
///   subdiv:{midpoint|loop|sqrt3}:IT     crop:FRACTION:SEED
struct AttackSpec {
    std::string kind;
    double amplitude = 0.0;
    int iterations = 0;
    double factor = 0.0;
    int bits = 0;
    double fraction = 0.0;
    SubdivisionScheme scheme = SubdivisionScheme::Midpoint;
    std::uint64_t seed = 0;
    std::string text;  // original spec string

    static AttackSpec parse(const std::string& text);

    /// Runs the attack; 'seed_override' (when nonzero) reseeds randomized
    /// attacks for repetition runs.
    Mesh apply(const Mesh& mesh, std::uint64_t seed_override = 0) const;

    /// True for attacks whose outcome depends on the seed.
    bool randomized() const;
};

}  // namespace meshwm
