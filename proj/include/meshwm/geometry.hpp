#pragma once

#include <utility>
#include <vector>

#include "meshwm/mesh.hpp"

namespace meshwm {

/// Derived geometric quantities of a mesh.
///
/// vertex_normals are area-weighted sums of incident face normals and are
/// deliberately left unnormalized: their norms carry local-area information
/// and serve as the watermark synchronization primitive. All accumulations
/// are performed in a geometry-derived canonical order, so every field is
/// bit-identical under permutations of vertex/face storage order.
struct MeshGeometry {
    Vec3 center;                        // center of gravity of the vertices
    double bbox_diag = 0.0;             // bounding-box diagonal length
    std::vector<Vec3> face_normals;     // unit vectors (zero for zero-area faces)
    std::vector<double> face_areas;
    std::vector<Vec3> vertex_normals;   // area-weighted, unnormalized
    std::vector<double> vertex_normal_norms;
    std::vector<double> radial_norms;   // ||v_i - center||
};

/// Computes center, bounding box, normals and radial norms.
/// Throws DegenerateGeometry if a vertex with incident faces ends up with an
/// exactly zero normal sum. Isolated vertices get a zero normal silently.
/// With allow_degenerate set, zero normal sums are kept instead of throwing;
/// the watermark pipeline uses this so extraction survives attacks that
/// collapse faces (coarse coordinate quantization, cropping).
MeshGeometry compute_geometry(const Mesh& mesh, bool allow_degenerate = false);

struct ReconstructResult {
    Mesh mesh;
    std::vector<int> skipped;  // vertices at the center that cannot move radially
};

/// Replaces each mapped vertex with center + new_norm * unit(v - center).
/// Unmapped vertices and connectivity are untouched. Vertices whose original
/// radial norm is zero are skipped and reported.
ReconstructResult reconstruct_from_norms(const Mesh& mesh, const MeshGeometry& geometry,
                                         const std::vector<std::pair<int, double>>& new_norms);

}  // namespace meshwm
