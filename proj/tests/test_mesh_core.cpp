#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "doctest.h"
#include "meshwm/errors.hpp"
#include "meshwm/geometry.hpp"
#include "meshwm/mesh_io.hpp"
#include "meshwm/prng.hpp"
#include "support/test_meshes.hpp"

using namespace meshwm;
using testsupport::make_cube;
using testsupport::make_random_blob;
using testsupport::make_tetrahedron;

namespace {

std::filesystem::path temp_dir() {
    const auto dir = std::filesystem::temp_directory_path() / "meshwm_mesh_core_tests";
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("off parser accepts a minimal tetrahedron") {
    const std::string text =
        "OFF\n4 4 0\n"
        "1 1 1\n1 -1 -1\n-1 1 -1\n-1 -1 1\n"
        "3 0 1 2\n3 0 2 3\n3 0 3 1\n3 1 3 2\n";
    const Mesh m = parse_off(text);
    CHECK(m.vertex_count() == 4);
    CHECK(m.face_count() == 4);
}

TEST_CASE("obj quad faces are fan triangulated") {
    const std::string text =
        "v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\n"
        "f 1 2 3 4\n";
    const Mesh m = parse_obj(text);
    CHECK(m.vertex_count() == 4);
    CHECK(m.face_count() == 2);
    CHECK(m.faces[0] == std::array<int, 3>{0, 1, 2});
    CHECK(m.faces[1] == std::array<int, 3>{0, 2, 3});
}

TEST_CASE("off with missing vertices is a parse error") {
    const std::string text = "OFF\n5 1 0\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n3 0 1 2\n";
    CHECK_THROWS_AS(parse_off(text), ParseError);
}

TEST_CASE("face index out of range is rejected") {
    const std::string text = "OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 7\n";
    CHECK_THROWS_AS(parse_off(text), IndexOutOfRange);
}

TEST_CASE("degenerate face with repeated index is rejected") {
    const std::string text = "OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 1\n";
    CHECK_THROWS_AS(parse_off(text), ParseError);
}

TEST_CASE("save/load round trip preserves faces exactly and vertices to 1e-9") {
    SplitMix64 gen(7);
    for (int trial = 0; trial < 4; ++trial) {
        Mesh m = make_random_blob(gen.next_u64(), 2);
        for (auto& v : m.vertices) v = v * gen.next_in(0.01, 100.0);
        for (const auto format : {MeshFormat::Off, MeshFormat::Obj}) {
            const auto path =
                (temp_dir() / ("roundtrip" + std::to_string(trial) +
                               (format == MeshFormat::Off ? ".off" : ".obj"))).string();
            save_mesh(m, path, format);
            const Mesh back = load_mesh(path, format);
            REQUIRE(back.vertex_count() == m.vertex_count());
            REQUIRE(back.faces == m.faces);
            for (int i = 0; i < m.vertex_count(); ++i) {
                const double scale = m.vertices[static_cast<std::size_t>(i)].norm();
                CHECK(distance(back.vertices[static_cast<std::size_t>(i)],
                               m.vertices[static_cast<std::size_t>(i)]) <=
                      1e-9 * std::max(scale, 1.0));
            }
        }
    }
}

TEST_CASE("saving a mesh without faces writes a valid file with face count 0") {
    Mesh m;
    m.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
    const auto path = (temp_dir() / "nofaces.off").string();
    save_mesh(m, path, MeshFormat::Off);
    const Mesh back = load_mesh(path, MeshFormat::Off);
    CHECK(back.vertex_count() == 3);
    CHECK(back.face_count() == 0);
}

TEST_CASE("unwritable path raises IoError") {
    CHECK_THROWS_AS(save_mesh(make_cube(), "/nonexistent_dir_zz/mesh.off", MeshFormat::Off),
                    IoError);
    CHECK_THROWS_AS(load_mesh("/nonexistent_dir_zz/mesh.off", MeshFormat::Off), IoError);
}

TEST_CASE("unit cube geometry: center at origin, radial norms sqrt(3)/2") {
    const Mesh cube = make_cube(1.0);
    const MeshGeometry g = compute_geometry(cube);
    CHECK(g.center.norm() < 1e-15);
    for (const double r : g.radial_norms) CHECK(r == doctest::Approx(std::sqrt(3.0) / 2).epsilon(1e-12));
    CHECK(g.bbox_diag == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
}

TEST_CASE("translation moves the center and leaves radial norms unchanged") {
    Mesh blob = make_random_blob(11, 2);
    const MeshGeometry before = compute_geometry(blob);
    const Vec3 t{12.5, -3.75, 0.625};
    for (auto& v : blob.vertices) v += t;
    const MeshGeometry after = compute_geometry(blob);
    CHECK(distance(after.center, before.center + t) < 1e-9);
    for (std::size_t i = 0; i < before.radial_norms.size(); ++i)
        CHECK(after.radial_norms[i] ==
              doctest::Approx(before.radial_norms[i]).epsilon(1e-9));
}

TEST_CASE("regular tetrahedron vertex normal norms all equal 2*sqrt(3)") {
    // Hand computation: each face is equilateral with area 2*sqrt(3); the
    // three face area vectors at each vertex sum to a vector of norm
    // 2*sqrt(3) pointing through the vertex.
    const MeshGeometry g = compute_geometry(make_tetrahedron());
    for (const double n : g.vertex_normal_norms)
        CHECK(n == doctest::Approx(2.0 * std::sqrt(3.0)).epsilon(1e-12));
}

TEST_CASE("rotation leaves radial norms and normal norms invariant to 1e-9") {
    const Mesh blob = make_random_blob(23, 2);
    const MeshGeometry before = compute_geometry(blob);
    const Mat3 rot = testsupport::rotation_xyz(0.31, -1.2, 2.55);
    Mesh rotated = blob;
    for (auto& v : rotated.vertices) v = rot * v;
    const MeshGeometry after = compute_geometry(rotated);
    for (std::size_t i = 0; i < before.radial_norms.size(); ++i) {
        CHECK(after.radial_norms[i] == doctest::Approx(before.radial_norms[i]).epsilon(1e-9));
        CHECK(after.vertex_normal_norms[i] ==
              doctest::Approx(before.vertex_normal_norms[i]).epsilon(1e-9));
        // The normal vector itself rotates with the mesh.
        CHECK(distance(after.vertex_normals[i], rot * before.vertex_normals[i]) <=
              1e-9 * std::max(1.0, before.vertex_normal_norms[i]));
    }
}

TEST_CASE("uniform scaling multiplies radial norms and bbox diagonal by s") {
    const Mesh blob = make_random_blob(31, 2);
    const MeshGeometry before = compute_geometry(blob);
    const double s = 3.7;
    Mesh scaled = blob;
    for (auto& v : scaled.vertices) v = v * s;
    const MeshGeometry after = compute_geometry(scaled);
    CHECK(after.bbox_diag == doctest::Approx(before.bbox_diag * s).epsilon(1e-9));
    for (std::size_t i = 0; i < before.radial_norms.size(); ++i)
        CHECK(after.radial_norms[i] == doctest::Approx(before.radial_norms[i] * s).epsilon(1e-9));
}

TEST_CASE("reconstruct with unchanged norms is the identity to 1e-12") {
    const Mesh blob = make_random_blob(43, 2);
    const MeshGeometry g = compute_geometry(blob);
    std::vector<std::pair<int, double>> norms;
    for (int i = 0; i < blob.vertex_count(); ++i)
        norms.push_back({i, g.radial_norms[static_cast<std::size_t>(i)]});
    const auto result = reconstruct_from_norms(blob, g, norms);
    CHECK(result.skipped.empty());
    for (int i = 0; i < blob.vertex_count(); ++i)
        CHECK(distance(result.mesh.vertices[static_cast<std::size_t>(i)],
                       blob.vertices[static_cast<std::size_t>(i)]) < 1e-12);
}

TEST_CASE("reconstruct scales a single vertex radially, direction preserved") {
    const Mesh blob = make_random_blob(47, 2);
    const MeshGeometry g = compute_geometry(blob);
    const int target = 17;
    const double old_norm = g.radial_norms[target];
    const auto result = reconstruct_from_norms(blob, g, {{target, old_norm * 2.0}});
    const Vec3 moved = result.mesh.vertices[target] - g.center;
    CHECK(moved.norm() == doctest::Approx(old_norm * 2.0).epsilon(1e-12));
    const Vec3 dir_before = (blob.vertices[target] - g.center).normalized();
    CHECK(moved.normalized().dot(dir_before) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("reconstruct over a 3-vertex subset changes exactly 3 positions") {
    const Mesh blob = make_random_blob(53, 2);  // 642 vertices
    REQUIRE(blob.vertex_count() >= 100);
    const MeshGeometry g = compute_geometry(blob);
    std::vector<std::pair<int, double>> norms = {{5, g.radial_norms[5] * 1.01},
                                                 {50, g.radial_norms[50] * 0.99},
                                                 {99, g.radial_norms[99] * 1.02}};
    const auto result = reconstruct_from_norms(blob, g, norms);
    int changed = 0;
    for (int i = 0; i < blob.vertex_count(); ++i)
        if (distance(result.mesh.vertices[static_cast<std::size_t>(i)],
                     blob.vertices[static_cast<std::size_t>(i)]) > 0.0)
            ++changed;
    CHECK(changed == 3);
    CHECK(result.mesh.faces == blob.faces);
}

TEST_CASE("vertex exactly at the center is skipped and reported") {
    Mesh m = make_tetrahedron();
    // Add the centroid itself as a 5th vertex on one face's fan.
    m.vertices.push_back({0, 0, 0});
    m.faces.push_back({0, 1, 4});
    const MeshGeometry g = compute_geometry(m);
    REQUIRE(g.radial_norms[4] == doctest::Approx(0.0));
    const auto result = reconstruct_from_norms(m, g, {{4, 1.0}});
    CHECK(result.skipped == std::vector<int>{4});
    CHECK(result.mesh.vertices[4] == m.vertices[4]);
}

TEST_CASE("a vertex whose faces are all zero-area throws DegenerateGeometry") {
    Mesh m;
    m.vertices = {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}};
    m.faces = {{0, 1, 2}};  // collinear, zero area
    CHECK_THROWS_AS(compute_geometry(m), DegenerateGeometry);
}

TEST_CASE("zero-area faces contribute a zero vector but are not fatal on their own") {
    // Midpoint of a cube edge plus a collinear face; every vertex still has
    // at least one healthy face, so geometry succeeds.
    Mesh cube = make_cube();
    cube.vertices.push_back({0.0, -0.5, -0.5});  // on edge 0-1
    cube.faces.push_back({0, 1, 8});             // zero area
    cube.faces.push_back({8, 1, 3});             // healthy
    const MeshGeometry g = compute_geometry(cube);
    CHECK(g.face_areas[12] == 0.0);
    CHECK(g.face_normals[12].norm() == 0.0);
    CHECK(g.vertex_normal_norms[8] > 0.0);
}

TEST_CASE("isolated vertices get a zero normal without throwing") {
    Mesh m = make_cube();
    m.vertices.push_back({3, 3, 3});  // no incident face
    const MeshGeometry g = compute_geometry(m);
    CHECK(g.vertex_normal_norms.back() == 0.0);
}

TEST_CASE("geometry is bit-identical under element reordering") {
    const Mesh blob = make_random_blob(61, 2);
    const MeshGeometry before = compute_geometry(blob);

    SplitMix64 gen(99);
    const auto perm = gen.next_permutation_of(blob.vertex_count());
    Mesh permuted;
    permuted.vertices.resize(blob.vertices.size());
    for (int old = 0; old < blob.vertex_count(); ++old)
        permuted.vertices[static_cast<std::size_t>(perm[static_cast<std::size_t>(old)])] =
            blob.vertices[static_cast<std::size_t>(old)];
    for (const auto& f : blob.faces) {
        std::array<int, 3> nf = {perm[static_cast<std::size_t>(f[0])],
                                 perm[static_cast<std::size_t>(f[1])],
                                 perm[static_cast<std::size_t>(f[2])]};
        // Rotate the face triple too; the canonical accumulation must not care.
        std::rotate(nf.begin(), nf.begin() + static_cast<int>(gen.next_below(3)), nf.end());
        permuted.faces.push_back(nf);
    }
    const MeshGeometry after = compute_geometry(permuted);
    CHECK(after.center == before.center);
    for (int old = 0; old < blob.vertex_count(); ++old) {
        const auto now = static_cast<std::size_t>(perm[static_cast<std::size_t>(old)]);
        CHECK(after.radial_norms[now] == before.radial_norms[static_cast<std::size_t>(old)]);
        CHECK(after.vertex_normal_norms[now] ==
              before.vertex_normal_norms[static_cast<std::size_t>(old)]);
    }
}
