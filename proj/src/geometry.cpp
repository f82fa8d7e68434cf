#include "meshwm/geometry.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "meshwm/errors.hpp"

namespace meshwm {

namespace {

// Rotates a face triple so the lexicographically smallest position comes
// first. The cross product is then computed from the same operand order no
// matter how the face was stored, which keeps derived geometry bit-identical
// under element reordering (reordering attacks rotate face index triples).
std::array<int, 3> canonical_face(const Mesh& mesh, const std::array<int, 3>& f) {
    const auto& vs = mesh.vertices;
    int best = 0;
    for (int k = 1; k < 3; ++k) {
        const auto& cand = vs[static_cast<std::size_t>(f[static_cast<std::size_t>(k)])];
        const auto& cur = vs[static_cast<std::size_t>(f[static_cast<std::size_t>(best)])];
        if (lex_less(cand, cur)) best = k;
    }
    return {f[static_cast<std::size_t>(best)], f[static_cast<std::size_t>((best + 1) % 3)],
            f[static_cast<std::size_t>((best + 2) % 3)]};
}

}  // namespace

MeshGeometry compute_geometry(const Mesh& mesh, bool allow_degenerate) {
    MeshGeometry g;
    const std::size_t n = mesh.vertices.size();

    // Center of gravity. Summing in lexicographic order makes the result
    // independent of vertex storage order.
    {
        std::vector<Vec3> sorted = mesh.vertices;
        std::sort(sorted.begin(), sorted.end(), lex_less);
        Vec3 sum;
        for (const auto& v : sorted) sum += v;
        g.center = n > 0 ? sum / static_cast<double>(n) : Vec3{};
    }

    Vec3 lo{std::numeric_limits<double>::max(), std::numeric_limits<double>::max(),
            std::numeric_limits<double>::max()};
    Vec3 hi = -lo;
    for (const auto& v : mesh.vertices) {
        lo = {std::min(lo.x, v.x), std::min(lo.y, v.y), std::min(lo.z, v.z)};
        hi = {std::max(hi.x, v.x), std::max(hi.y, v.y), std::max(hi.z, v.z)};
    }
    g.bbox_diag = n > 0 ? (hi - lo).norm() : 0.0;

    g.face_normals.resize(mesh.faces.size());
    g.face_areas.resize(mesh.faces.size());
    std::vector<std::vector<Vec3>> contributions(n);
    for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
        const auto face = canonical_face(mesh, mesh.faces[f]);
        const Vec3& a = mesh.vertices[static_cast<std::size_t>(face[0])];
        const Vec3& b = mesh.vertices[static_cast<std::size_t>(face[1])];
        const Vec3& c = mesh.vertices[static_cast<std::size_t>(face[2])];
        const Vec3 area_vec = (b - a).cross(c - a) * 0.5;  // unit normal * face area
        const double area = area_vec.norm();
        g.face_areas[f] = area;
        g.face_normals[f] = area > 0.0 ? area_vec / area : Vec3{};
        for (const int v : mesh.faces[f])
            contributions[static_cast<std::size_t>(v)].push_back(area_vec);
    }

    g.vertex_normals.resize(n);
    g.vertex_normal_norms.resize(n);
    for (std::size_t v = 0; v < n; ++v) {
        auto& list = contributions[v];
        std::sort(list.begin(), list.end(), lex_less);
        Vec3 sum;
        for (const auto& c : list) sum += c;
        if (!list.empty() && sum.norm2() == 0.0 && !allow_degenerate)
            throw DegenerateGeometry("vertex " + std::to_string(v) +
                                     " has incident faces but a zero normal sum");
        g.vertex_normals[v] = sum;
        g.vertex_normal_norms[v] = sum.norm();
    }

    g.radial_norms.resize(n);
    for (std::size_t v = 0; v < n; ++v) g.radial_norms[v] = (mesh.vertices[v] - g.center).norm();
    return g;
}

ReconstructResult reconstruct_from_norms(const Mesh& mesh, const MeshGeometry& geometry,
                                         const std::vector<std::pair<int, double>>& new_norms) {
    ReconstructResult out;
    out.mesh = mesh;
    for (const auto& [idx, norm] : new_norms) {
        const auto v = static_cast<std::size_t>(idx);
        const double old_norm = geometry.radial_norms[v];
        if (old_norm <= 0.0) {
            out.skipped.push_back(idx);
            continue;
        }
        const Vec3 dir = (mesh.vertices[v] - geometry.center) / old_norm;
        out.mesh.vertices[v] = geometry.center + dir * norm;
    }
    return out;
}

}  // namespace meshwm
