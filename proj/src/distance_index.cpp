#include "meshwm/distance_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "meshwm/errors.hpp"

namespace meshwm {

namespace {

Vec3 closest_point_on_segment(const Vec3& p, const Vec3& a, const Vec3& b) {
    const Vec3 ab = b - a;
    const double len2 = ab.norm2();
    if (len2 == 0.0) return a;
    double t = (p - a).dot(ab) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return a + ab * t;
}

}  // namespace

Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
    const Vec3 ab = b - a, ac = c - a, ap = p - a;
    const double d1 = ab.dot(ap), d2 = ac.dot(ap);
    if (d1 <= 0.0 && d2 <= 0.0) return a;

    const Vec3 bp = p - b;
    const double d3 = ab.dot(bp), d4 = ac.dot(bp);
    if (d3 >= 0.0 && d4 <= d3) return b;

    const double vc = d1 * d4 - d3 * d2;
    if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return a + ab * (d1 / (d1 - d3));

    const Vec3 cp = p - c;
    const double d5 = ab.dot(cp), d6 = ac.dot(cp);
    if (d6 >= 0.0 && d5 <= d6) return c;

    const double vb = d5 * d2 - d1 * d6;
    if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return a + ac * (d2 / (d2 - d6));

    const double va = d3 * d6 - d5 * d4;
    if (va <= 0.0 && d4 - d3 >= 0.0 && d5 - d6 >= 0.0) {
        const double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        return b + (c - b) * w;
    }

    const double denom = va + vb + vc;
    if (denom <= 0.0) {
        // Degenerate (zero-area) triangle: closest point lies on an edge.
        const Vec3 q1 = closest_point_on_segment(p, a, b);
        const Vec3 q2 = closest_point_on_segment(p, b, c);
        const Vec3 q3 = closest_point_on_segment(p, c, a);
        Vec3 best = q1;
        if (distance2(p, q2) < distance2(p, best)) best = q2;
        if (distance2(p, q3) < distance2(p, best)) best = q3;
        return best;
    }
    const double v = vb / denom, w = vc / denom;
    return a + ab * v + ac * w;
}

DistanceIndex::DistanceIndex(const Mesh& mesh) : mesh_(mesh) {
    if (mesh.face_count() == 0) throw Error("distance index needs a non-empty mesh");
    tri_order_.resize(static_cast<std::size_t>(mesh.face_count()));
    for (int i = 0; i < mesh.face_count(); ++i) tri_order_[static_cast<std::size_t>(i)] = i;
    nodes_.reserve(tri_order_.size() * 2);
    root_ = build(tri_order_, 0, static_cast<int>(tri_order_.size()));
}

int DistanceIndex::build(std::vector<int>& tris, int begin, int end) {
    Node node;
    node.lo = {std::numeric_limits<double>::max(), std::numeric_limits<double>::max(),
               std::numeric_limits<double>::max()};
    node.hi = -node.lo;
    Vec3 centroid_lo = node.lo, centroid_hi = node.hi;
    for (int i = begin; i < end; ++i) {
        const auto& f = mesh_.faces[static_cast<std::size_t>(tris[static_cast<std::size_t>(i)])];
        Vec3 cen;
        for (const int v : f) {
            const Vec3& p = mesh_.vertices[static_cast<std::size_t>(v)];
            node.lo = {std::min(node.lo.x, p.x), std::min(node.lo.y, p.y),
                       std::min(node.lo.z, p.z)};
            node.hi = {std::max(node.hi.x, p.x), std::max(node.hi.y, p.y),
                       std::max(node.hi.z, p.z)};
            cen += p;
        }
        cen = cen / 3.0;
        centroid_lo = {std::min(centroid_lo.x, cen.x), std::min(centroid_lo.y, cen.y),
                       std::min(centroid_lo.z, cen.z)};
        centroid_hi = {std::max(centroid_hi.x, cen.x), std::max(centroid_hi.y, cen.y),
                       std::max(centroid_hi.z, cen.z)};
    }

    const int count = end - begin;
    if (count <= 4) {
        node.begin = begin;
        node.end = end;
        nodes_.push_back(node);
        return static_cast<int>(nodes_.size()) - 1;
    }

    // Median split along the widest centroid axis.
    const Vec3 extent = centroid_hi - centroid_lo;
    int axis = 0;
    if (extent.y > extent.x) axis = 1;
    if (extent.z > (axis == 0 ? extent.x : extent.y)) axis = 2;
    const int mid = begin + count / 2;
    auto centroid_axis = [&](int tri) {
        const auto& f = mesh_.faces[static_cast<std::size_t>(tri)];
        double s = 0.0;
        for (const int v : f) {
            const Vec3& p = mesh_.vertices[static_cast<std::size_t>(v)];
            s += axis == 0 ? p.x : axis == 1 ? p.y : p.z;
        }
        return s;
    };
    std::nth_element(tris.begin() + begin, tris.begin() + mid, tris.begin() + end,
                     [&](int a, int b) {
                         const double ca = centroid_axis(a), cb = centroid_axis(b);
                         if (ca != cb) return ca < cb;
                         return a < b;
                     });

    const int self = static_cast<int>(nodes_.size());
    nodes_.push_back(node);
    const int left = build(tris, begin, mid);
    const int right = build(tris, mid, end);
    nodes_[static_cast<std::size_t>(self)].left = left;
    nodes_[static_cast<std::size_t>(self)].right = right;
    return self;
}

double DistanceIndex::box_distance2(const Node& n, const Vec3& p) const {
    const double dx = std::max({n.lo.x - p.x, 0.0, p.x - n.hi.x});
    const double dy = std::max({n.lo.y - p.y, 0.0, p.y - n.hi.y});
    const double dz = std::max({n.lo.z - p.z, 0.0, p.z - n.hi.z});
    return dx * dx + dy * dy + dz * dz;
}

DistanceIndex::Nearest DistanceIndex::nearest(const Vec3& p) const {
    Nearest best;
    double best_d2 = std::numeric_limits<double>::max();

    std::vector<int> stack;
    stack.reserve(64);
    stack.push_back(root_);
    while (!stack.empty()) {
        const Node& node = nodes_[static_cast<std::size_t>(stack.back())];
        stack.pop_back();
        if (box_distance2(node, p) >= best_d2) continue;
        if (node.left < 0) {
            for (int i = node.begin; i < node.end; ++i) {
                const int tri = tri_order_[static_cast<std::size_t>(i)];
                const auto& f = mesh_.faces[static_cast<std::size_t>(tri)];
                const Vec3 q = closest_point_on_triangle(
                    p, mesh_.vertices[static_cast<std::size_t>(f[0])],
                    mesh_.vertices[static_cast<std::size_t>(f[1])],
                    mesh_.vertices[static_cast<std::size_t>(f[2])]);
                const double d2 = distance2(p, q);
                if (d2 < best_d2) {
                    best_d2 = d2;
                    best.point = q;
                    best.face = tri;
                }
            }
        } else {
            // Visit the nearer child first for tighter pruning.
            const double dl = box_distance2(nodes_[static_cast<std::size_t>(node.left)], p);
            const double dr = box_distance2(nodes_[static_cast<std::size_t>(node.right)], p);
            if (dl < dr) {
                stack.push_back(node.right);
                stack.push_back(node.left);
            } else {
                stack.push_back(node.left);
                stack.push_back(node.right);
            }
        }
    }
    best.dist = std::sqrt(best_d2);
    return best;
}

}  // namespace meshwm
