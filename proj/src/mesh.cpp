#include "meshwm/mesh.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "meshwm/errors.hpp"

namespace meshwm {

void Mesh::validate() const {
    const int n = vertex_count();
    for (std::size_t f = 0; f < faces.size(); ++f) {
        const auto& face = faces[f];
        for (const int idx : face) {
            if (idx < 0 || idx >= n)
                throw IndexOutOfRange("face " + std::to_string(f) + " references vertex " +
                                      std::to_string(idx) + " outside [0, " + std::to_string(n) +
                                      ")");
        }
        if (face[0] == face[1] || face[1] == face[2] || face[0] == face[2])
            throw ParseError("face " + std::to_string(f) + " is degenerate (repeated index)");
    }
}

int Mesh::edge_count() const {
    std::set<std::pair<int, int>> edges;
    for (const auto& f : faces)
        for (int k = 0; k < 3; ++k) {
            const int a = f[static_cast<std::size_t>(k)];
            const int b = f[static_cast<std::size_t>((k + 1) % 3)];
            edges.insert({std::min(a, b), std::max(a, b)});
        }
    return static_cast<int>(edges.size());
}

std::vector<std::vector<int>> incident_faces(const Mesh& mesh) {
    std::vector<std::vector<int>> inc(static_cast<std::size_t>(mesh.vertex_count()));
    for (int f = 0; f < mesh.face_count(); ++f)
        for (const int v : mesh.faces[static_cast<std::size_t>(f)])
            inc[static_cast<std::size_t>(v)].push_back(f);
    return inc;
}

std::vector<std::vector<int>> vertex_neighbors(const Mesh& mesh) {
    std::vector<std::vector<int>> nbr(static_cast<std::size_t>(mesh.vertex_count()));
    for (const auto& f : mesh.faces)
        for (int k = 0; k < 3; ++k) {
            const int a = f[static_cast<std::size_t>(k)];
            const int b = f[static_cast<std::size_t>((k + 1) % 3)];
            nbr[static_cast<std::size_t>(a)].push_back(b);
            nbr[static_cast<std::size_t>(b)].push_back(a);
        }
    for (auto& list : nbr) {
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
    }
    return nbr;
}

}  // namespace meshwm
