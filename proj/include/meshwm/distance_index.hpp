#pragma once

#include <vector>

#include "meshwm/mesh.hpp"

namespace meshwm {

/// Exact closest point on a triangle (Ericson-style region tests, with a
/// segment fallback for degenerate triangles).
Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c);

/// Axis-aligned bounding-box hierarchy over the triangles of a mesh for
/// exact point-to-surface distance queries. Immutable after construction and
/// safe for concurrent queries.
class DistanceIndex {
  public:
    explicit DistanceIndex(const Mesh& mesh);

    struct Nearest {
        double dist = 0.0;
        Vec3 point;
        int face = -1;
    };

    /// Exact nearest point on the surface; equals the brute-force minimum
    /// over all triangles.
    Nearest nearest(const Vec3& p) const;
    double distance(const Vec3& p) const { return nearest(p).dist; }

  private:
    struct Node {
        Vec3 lo, hi;
        int left = -1;    // internal nodes: children
        int right = -1;
        int begin = 0;    // leaves: range in tri_order_
        int end = 0;
    };

    int build(std::vector<int>& tris, int begin, int end);
    double box_distance2(const Node& n, const Vec3& p) const;

    const Mesh& mesh_;
    std::vector<Node> nodes_;
    std::vector<int> tri_order_;
    int root_ = -1;
};

}  // namespace meshwm
