#pragma once

#include <string>
#include <vector>

#include "meshwm/curvature.hpp"
#include "meshwm/geometry.hpp"
#include "meshwm/mesh.hpp"
#include "meshwm/spatial_grid.hpp"

namespace meshwm {

struct SaliencyParams {
    double sigma = 0.0;             // fine scale, absolute length; must be > 0
    double salient_fraction = 0.70; // fraction of vertices kept as salient
};

struct SaliencyMap {
    std::vector<double> scores;   // per-vertex saliency, >= 0
    std::vector<int> salient;     // selected vertices, descending score
    double threshold_value = 0.0; // score of the last selected vertex
    int isolated_count = 0;       // vertices with no incident face (warning)
};

/// Gaussian-weighted average of a per-vertex field over the neighborhood
/// N(v, 2*sigma), with weights exp(-d^2 / (2 sigma^2)). The denominator is
/// at least 1 because v itself always contributes weight 1.
double gaussian_weighted_curvature(const std::vector<Vec3>& points, const SpatialGrid& grid,
                                   const std::vector<double>& field, int v, double sigma);

/// Perceptual saliency: the absolute difference between Gaussian-weighted
/// mean-curvature averages at scales sigma and 2*sigma, followed by
/// selection of the top salient_fraction of vertices.
SaliencyMap compute_saliency(const Mesh& mesh, const MeshGeometry& geometry,
                             const SaliencyParams& params);

/// Top round(fraction * n) vertex indices by score, descending; ties at equal
/// score break by ascending vertex index so selection is deterministic.
std::vector<int> select_salient(const std::vector<double>& scores, double fraction);

/// "vertex_index,score" CSV lines for external heatmap viewers.
std::string saliency_scores_csv(const SaliencyMap& map);

}  // namespace meshwm
