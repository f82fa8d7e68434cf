#pragma once

#include <vector>

#include "meshwm/geometry.hpp"
#include "meshwm/mesh.hpp"

namespace meshwm {

struct CurvatureResult {
    std::vector<double> mean;   // per-vertex discrete mean curvature
    std::vector<int> isolated;  // vertices with no incident face (curvature 0)
};

/// Discrete mean curvature per vertex, estimated with Taubin's
/// integral-of-directional-curvatures matrix. The matrix trace equals the
/// sum of the two tangent-plane eigenvalues, and through Taubin's
/// (3*k1 - k2)/(3*k2 - k1) eigenvalue relation that trace is exactly the
/// mean curvature, so no explicit eigendecomposition is required:
///
///   mean(v) = sum_j w_j * k_j,   k_j = 2 <n_v, v - v_j> / ||v_j - v||^2
///
/// with w_j proportional to the area of the faces containing edge (v, j),
/// normalized to sum 1. Convex regions with outward normals are positive.
/// Boundary vertices use their partial ring. Isolated vertices get 0 and are
/// reported.
CurvatureResult taubin_mean_curvature(const Mesh& mesh, const MeshGeometry& geometry);

}  // namespace meshwm
