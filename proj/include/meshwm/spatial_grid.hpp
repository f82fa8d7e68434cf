#pragma once

#include <vector>

#include "meshwm/vec3.hpp"

namespace meshwm {

/// Uniform hash grid over a point set for fixed-radius neighbor queries.
/// Queries return exactly the brute-force result (strict '<' on distance);
/// the grid only prunes candidates.
class SpatialGrid {
  public:
    SpatialGrid(const std::vector<Vec3>& points, double cell_size);

    /// Indices of all points p with ||p - q|| < radius, sorted by
    /// (distance^2, lexicographic position) so downstream accumulation is
    /// independent of point storage order. radius must be <= cell size.
    std::vector<int> query(const Vec3& q, double radius) const;

    double cell_size() const { return cell_; }

  private:
    struct CellKey {
        long long x, y, z;
        bool operator<(const CellKey& o) const {
            if (x != o.x) return x < o.x;
            if (y != o.y) return y < o.y;
            return z < o.z;
        }
    };

    CellKey key_of(const Vec3& p) const;

    const std::vector<Vec3>& points_;
    double cell_;
    // Sorted (cell, point index) pairs; cells are located by binary search.
    std::vector<std::pair<CellKey, int>> entries_;
};

/// Ball neighborhood around vertex v: all vertices within 'radius'
/// (strict), including v itself. The grid argument must have been built over
/// the same vertex array with cell size >= radius.
std::vector<int> ball_neighborhood(const std::vector<Vec3>& points, const SpatialGrid& grid,
                                   int v, double radius);

}  // namespace meshwm
