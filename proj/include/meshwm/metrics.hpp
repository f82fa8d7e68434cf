#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "meshwm/mesh.hpp"

namespace meshwm {

struct MetricReport {
    double mrms = 0.0;
    double hausdorff = 0.0;
    double msdm = 0.0;        // in [0, 1); NaN-free, -1 when not applicable
    double correlation = 0.0; // in [-1, 1]
    int sample_count = 0;

    static std::string csv_header();
    std::string csv_row(const std::string& mesh_id, const std::string& attack,
                        const std::string& params) const;
};

struct SamplingParams {
    int samples_per_face = 10;
    int min_total = 2000;
    int min_total_large = 50000;  // used once a mesh has >= 5000 faces
    std::uint64_t seed = 1;

    int total_for(const Mesh& mesh) const;
};

/// Stratified area-proportional barycentric samples, at least one per face,
/// deterministic for a fixed seed.
std::vector<Vec3> sample_surface(const Mesh& mesh, int total, std::uint64_t seed);

/// One-sided sampled RMS point-to-surface distance from A to B.
double rms_distance(const Mesh& a, const Mesh& b, const SamplingParams& sampling);

/// max(rms(A,B), rms(B,A)).
double mrms(const Mesh& a, const Mesh& b, const SamplingParams& sampling);

/// Sampled symmetric Hausdorff distance. Samples include the mesh vertices,
/// so single-vertex excursions register; still an underestimate of the true
/// supremum, as any sampled Hausdorff is.
double hausdorff(const Mesh& a, const Mesh& b, const SamplingParams& sampling);

struct MsdmParams {
    double radius = 0.0;  // window radius; <= 0 means 0.005 * bbox_diag of A
};

/// Structural distortion in [0, 1) between meshes with shared vertex
/// indexing. Per-vertex windows compare Gaussian-weighted curvature
/// statistics (mean / deviation / covariance) through curvature, contrast
/// and structure terms pooled with a Minkowski-3 mean.
/// Throws CorrespondenceMismatch when vertex counts differ.
double msdm(const Mesh& a, const Mesh& b, const MsdmParams& params = {});

struct CorrelationResult {
    double value = 0.0;
    bool degenerate = false;  // a constant sequence; value defined as 0
};

/// Pearson correlation of two equal-length bit sequences.
CorrelationResult correlation(const std::vector<int>& w, const std::vector<int>& w_prime);

}  // namespace meshwm
