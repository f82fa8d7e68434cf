#include "meshwm/saliency.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "meshwm/errors.hpp"

namespace meshwm {

double gaussian_weighted_curvature(const std::vector<Vec3>& points, const SpatialGrid& grid,
                                   const std::vector<double>& field, int v, double sigma) {
    const auto neighborhood = ball_neighborhood(points, grid, v, 2.0 * sigma);
    const Vec3& pv = points[static_cast<std::size_t>(v)];
    const double inv = 1.0 / (2.0 * sigma * sigma);
    double num = 0.0, den = 0.0;
    for (const int x : neighborhood) {
        const double w = std::exp(-distance2(points[static_cast<std::size_t>(x)], pv) * inv);
        num += field[static_cast<std::size_t>(x)] * w;
        den += w;
    }
    return num / den;
}

SaliencyMap compute_saliency(const Mesh& mesh, const MeshGeometry& geometry,
                             const SaliencyParams& params) {
    if (!(params.sigma > 0.0)) throw Error("saliency sigma must be positive");
    if (!(params.salient_fraction > 0.0) || params.salient_fraction > 1.0)
        throw Error("salient fraction must be in (0, 1]");

    const auto curvature = taubin_mean_curvature(mesh, geometry);
    const std::size_t n = mesh.vertices.size();

    SaliencyMap map;
    map.isolated_count = static_cast<int>(curvature.isolated.size());
    map.scores.assign(n, 0.0);

    // One grid sized for the coarse-scale ball (radius 4*sigma) serves both
    // scales; queries stay exact for any radius.
    const SpatialGrid grid(mesh.vertices, 4.0 * params.sigma);
    const double sigma = params.sigma;
    const double inv_fine = 1.0 / (2.0 * sigma * sigma);
    const double inv_coarse = 1.0 / (8.0 * sigma * sigma);
    const double fine_r2 = 4.0 * sigma * sigma;  // fine ball radius is 2*sigma

    for (std::size_t v = 0; v < n; ++v) {
        const Vec3& pv = mesh.vertices[v];
        const auto coarse = grid.query(pv, 4.0 * sigma);
        // Hits come sorted by distance, so the fine ball is a prefix.
        double fine_num = 0.0, fine_den = 0.0, coarse_num = 0.0, coarse_den = 0.0;
        for (const int x : coarse) {
            const double d2 = distance2(mesh.vertices[static_cast<std::size_t>(x)], pv);
            const double c = curvature.mean[static_cast<std::size_t>(x)];
            const double wc = std::exp(-d2 * inv_coarse);
            coarse_num += c * wc;
            coarse_den += wc;
            if (d2 < fine_r2) {
                const double wf = std::exp(-d2 * inv_fine);
                fine_num += c * wf;
                fine_den += wf;
            }
        }
        map.scores[v] = std::fabs(fine_num / fine_den - coarse_num / coarse_den);
    }

    map.salient = select_salient(map.scores, params.salient_fraction);
    map.threshold_value =
        map.salient.empty() ? 0.0 : map.scores[static_cast<std::size_t>(map.salient.back())];
    return map;
}

std::vector<int> select_salient(const std::vector<double>& scores, double fraction) {
    const auto n = static_cast<long long>(scores.size());
    const auto count = std::min<long long>(n, std::llround(fraction * static_cast<double>(n)));
    std::vector<int> order(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const double sa = scores[static_cast<std::size_t>(a)];
        const double sb = scores[static_cast<std::size_t>(b)];
        if (sa != sb) return sa > sb;
        return a < b;
    });
    order.resize(static_cast<std::size_t>(std::max<long long>(count, 0)));
    return order;
}

std::string saliency_scores_csv(const SaliencyMap& map) {
    std::ostringstream out;
    out << "vertex_index,score\n";
    char buf[64];
    for (std::size_t i = 0; i < map.scores.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%zu,%.12g\n", i, map.scores[i]);
        out << buf;
    }
    return out.str();
}

}  // namespace meshwm
