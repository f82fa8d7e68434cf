#include "meshwm/curvature.hpp"

#include <algorithm>
#include <utility>

namespace meshwm {

CurvatureResult taubin_mean_curvature(const Mesh& mesh, const MeshGeometry& geometry) {
    const std::size_t n = mesh.vertices.size();
    CurvatureResult out;
    out.mean.assign(n, 0.0);

    const auto inc = incident_faces(mesh);

    // Per-vertex edge weights: for neighbor j of v, the areas of the (at
    // most two, more on non-manifold edges) faces containing edge (v, j).
    std::vector<std::vector<std::pair<int, std::vector<double>>>> edge_areas(n);
    auto area_slot = [&](int v, int j) -> std::vector<double>& {
        auto& list = edge_areas[static_cast<std::size_t>(v)];
        for (auto& [nbr, areas] : list)
            if (nbr == j) return areas;
        list.push_back({j, {}});
        return list.back().second;
    };
    for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
        const auto& face = mesh.faces[f];
        const double area = geometry.face_areas[f];
        for (int k = 0; k < 3; ++k) {
            const int a = face[static_cast<std::size_t>(k)];
            const int b = face[static_cast<std::size_t>((k + 1) % 3)];
            area_slot(a, b).push_back(area);
            area_slot(b, a).push_back(area);
        }
    }

    for (std::size_t v = 0; v < n; ++v) {
        if (inc[v].empty()) {
            out.isolated.push_back(static_cast<int>(v));
            continue;
        }
        const Vec3 normal = geometry.vertex_normals[v].normalized();
        if (normal.norm2() == 0.0) {
            out.isolated.push_back(static_cast<int>(v));
            continue;
        }

        auto& ring = edge_areas[v];
        // Neighbor iteration sorted by position so the weighted sum does not
        // depend on vertex/face storage order.
        std::sort(ring.begin(), ring.end(), [&](const auto& a, const auto& b) {
            const Vec3& pa = mesh.vertices[static_cast<std::size_t>(a.first)];
            const Vec3& pb = mesh.vertices[static_cast<std::size_t>(b.first)];
            if (pa != pb) return lex_less(pa, pb);
            return a.first < b.first;
        });

        double weight_sum = 0.0;
        double curv_sum = 0.0;
        const Vec3& pv = mesh.vertices[v];
        for (auto& [j, areas] : ring) {
            std::sort(areas.begin(), areas.end());
            double w = 0.0;
            for (const double a : areas) w += a;
            const Vec3 d = mesh.vertices[static_cast<std::size_t>(j)] - pv;
            const double len2 = d.norm2();
            if (len2 == 0.0) continue;  // duplicate position, no direction
            const double kappa = 2.0 * normal.dot(pv - mesh.vertices[static_cast<std::size_t>(j)]) /
                                 len2;
            curv_sum += w * kappa;
            weight_sum += w;
        }
        out.mean[v] = weight_sum > 0.0 ? curv_sum / weight_sum : 0.0;
    }
    return out;
}

}  // namespace meshwm
