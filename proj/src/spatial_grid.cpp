#include "meshwm/spatial_grid.hpp"

#include <algorithm>
#include <cmath>

namespace meshwm {

SpatialGrid::SpatialGrid(const std::vector<Vec3>& points, double cell_size)
    : points_(points), cell_(cell_size > 0.0 ? cell_size : 1.0) {
    entries_.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i)
        entries_.push_back({key_of(points[i]), static_cast<int>(i)});
    std::sort(entries_.begin(), entries_.end(),
              [](const auto& a, const auto& b) {
                  if (a.first < b.first) return true;
                  if (b.first < a.first) return false;
                  return a.second < b.second;
              });
}

SpatialGrid::CellKey SpatialGrid::key_of(const Vec3& p) const {
    return {static_cast<long long>(std::floor(p.x / cell_)),
            static_cast<long long>(std::floor(p.y / cell_)),
            static_cast<long long>(std::floor(p.z / cell_))};
}

std::vector<int> SpatialGrid::query(const Vec3& q, double radius) const {
    const double r2 = radius * radius;
    const CellKey base = key_of(q);
    // radius <= cell size, so 27 cells suffice. Larger radii fall back to
    // scanning enough cells to stay exact.
    const auto reach = static_cast<long long>(std::ceil(radius / cell_));

    struct Hit {
        double d2;
        int idx;
    };
    std::vector<Hit> hits;
    for (long long dx = -reach; dx <= reach; ++dx)
        for (long long dy = -reach; dy <= reach; ++dy)
            for (long long dz = -reach; dz <= reach; ++dz) {
                const CellKey key{base.x + dx, base.y + dy, base.z + dz};
                auto it = std::lower_bound(entries_.begin(), entries_.end(), key,
                                           [](const auto& e, const CellKey& k) {
                                               return e.first < k;
                                           });
                for (; it != entries_.end() && !(key < it->first); ++it) {
                    const auto& p = points_[static_cast<std::size_t>(it->second)];
                    const double d2 = distance2(p, q);
                    if (d2 < r2) hits.push_back({d2, it->second});
                }
            }
    std::sort(hits.begin(), hits.end(), [this](const Hit& a, const Hit& b) {
        if (a.d2 != b.d2) return a.d2 < b.d2;
        const auto& pa = points_[static_cast<std::size_t>(a.idx)];
        const auto& pb = points_[static_cast<std::size_t>(b.idx)];
        if (pa != pb) return lex_less(pa, pb);
        return a.idx < b.idx;
    });
    std::vector<int> out;
    out.reserve(hits.size());
    for (const auto& h : hits) out.push_back(h.idx);
    return out;
}

std::vector<int> ball_neighborhood(const std::vector<Vec3>& points, const SpatialGrid& grid,
                                   int v, double radius) {
    return grid.query(points[static_cast<std::size_t>(v)], radius);
}

}  // namespace meshwm
