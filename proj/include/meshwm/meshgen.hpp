#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "meshwm/mesh.hpp"

namespace meshwm {

/// Icosahedron refined by midpoint subdivision, vertices projected to the
/// sphere. Vertex counts: 12, 42, 162, 642, 2562, 10242, 40962, ...
Mesh make_icosphere(int subdivisions, double radius = 1.0);

/// Latitude/longitude sphere: slices >= 3 azimuth segments, stacks >= 2
/// rings. Vertex count = slices * (stacks - 1) + 2.
Mesh make_uv_sphere(int slices, int stacks, double radius = 1.0);

/// Torus grid: major x minor vertices, fully periodic.
Mesh make_torus(int major_segments, int minor_segments, double major_radius,
                double minor_radius);

/// Flat triangulated grid in the z = 0 plane (curvature fixtures).
Mesh make_plane_grid(int nx, int ny, double extent = 1.0);

/// Sphere-like blob: icosphere with 'bumps' random smooth Gaussian bumps of
/// the given amplitude and angular width; seeded, deterministic.
Mesh make_bumpy_sphere(int subdivisions, int bumps, double amplitude, double width,
                       std::uint64_t seed);

/// Named evaluation fixtures used by the benchmark and the acceptance suite:
///   blob_a, blob_b, torus, lobed, superquad  (desk-sized, <= 10k vertices)
///   dense                                     (organic, ~41k vertices)
///   catsized                                  (torus with exactly 3534 vertices)
Mesh make_fixture(const std::string& name);

std::vector<std::string> fixture_names();

}  // namespace meshwm
