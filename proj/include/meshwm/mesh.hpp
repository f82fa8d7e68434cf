#pragma once

#include <array>
#include <vector>

#include "meshwm/vec3.hpp"

namespace meshwm {

/// Indexed triangle mesh. Faces are counter-clockwise vertex index triples.
/// A Mesh is a plain value: immutable by convention once built, cheap to copy
/// for attack pipelines, safe to share read-only.
struct Mesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 3>> faces;

    int vertex_count() const { return static_cast<int>(vertices.size()); }
    int face_count() const { return static_cast<int>(faces.size()); }

    /// Throws IndexOutOfRange / ParseError if a face references a missing
    /// vertex or repeats an index.
    void validate() const;

    /// Undirected unique edge count (useful for subdivision bookkeeping).
    int edge_count() const;
};

/// Per-vertex lists of incident face indices.
std::vector<std::vector<int>> incident_faces(const Mesh& mesh);

/// Per-vertex 1-ring neighbor lists, deduplicated, sorted by index.
std::vector<std::vector<int>> vertex_neighbors(const Mesh& mesh);

}  // namespace meshwm
