#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"
#include "meshwm/curvature.hpp"
#include "meshwm/meshgen.hpp"
#include "meshwm/prng.hpp"
#include "meshwm/saliency.hpp"
#include "support/test_meshes.hpp"

using namespace meshwm;
using testsupport::make_random_blob;

namespace {

// Brute-force oracle for ball neighborhoods: O(n^2) scan, strict '<'.
std::set<int> brute_ball(const std::vector<Vec3>& points, int v, double radius) {
    std::set<int> out;
    for (std::size_t i = 0; i < points.size(); ++i)
        if (distance(points[i], points[static_cast<std::size_t>(v)]) < radius)
            out.insert(static_cast<int>(i));
    return out;
}

// Independent evaluation of the two-scale weighted-curvature difference with
// no spatial index; mirrors the defining formulas directly.
std::vector<double> brute_saliency(const Mesh& mesh, const std::vector<double>& curv,
                                   double sigma) {
    const std::size_t n = mesh.vertices.size();
    std::vector<double> scores(n, 0.0);
    for (std::size_t v = 0; v < n; ++v) {
        double g[2] = {0.0, 0.0};
        for (int scale = 0; scale < 2; ++scale) {
            const double s = scale == 0 ? sigma : 2.0 * sigma;
            double num = 0.0, den = 0.0;
            for (std::size_t x = 0; x < n; ++x) {
                const double d2 = distance2(mesh.vertices[x], mesh.vertices[v]);
                if (d2 < 4.0 * s * s) {  // N(v, 2s), strict
                    const double w = std::exp(-d2 / (2.0 * s * s));
                    num += curv[x] * w;
                    den += w;
                }
            }
            g[scale] = num / den;
        }
        scores[v] = std::fabs(g[0] - g[1]);
    }
    return scores;
}

}  // namespace

TEST_CASE("taubin curvature of a unit icosphere is close to 1") {
    const Mesh sphere = make_icosphere(3);
    const MeshGeometry g = compute_geometry(sphere);
    const auto curv = taubin_mean_curvature(sphere, g);
    for (const double k : curv.mean) CHECK(k == doctest::Approx(1.0).epsilon(0.10));
}

TEST_CASE("taubin curvature scales as 1/r") {
    const Mesh sphere = make_icosphere(3, 2.0);
    const MeshGeometry g = compute_geometry(sphere);
    const auto curv = taubin_mean_curvature(sphere, g);
    for (const double k : curv.mean) CHECK(k == doctest::Approx(0.5).epsilon(0.10));
}

TEST_CASE("flat plane interior vertices have zero curvature") {
    const Mesh plane = make_plane_grid(12, 12);
    const MeshGeometry g = compute_geometry(plane);
    const auto curv = taubin_mean_curvature(plane, g);
    // Interior vertices only; the boundary ring has a partial ring.
    for (int j = 1; j < 11; ++j)
        for (int i = 1; i < 11; ++i)
            CHECK(std::fabs(curv.mean[static_cast<std::size_t>(j * 12 + i)]) < 1e-6);
}

TEST_CASE("isolated vertices are reported and get zero curvature") {
    Mesh m = testsupport::make_tetrahedron();
    m.vertices.push_back({5, 5, 5});
    const MeshGeometry g = compute_geometry(m);
    const auto curv = taubin_mean_curvature(m, g);
    CHECK(curv.isolated == std::vector<int>{4});
    CHECK(curv.mean[4] == 0.0);
}

TEST_CASE("ball neighborhood: singleton below the minimum spacing") {
    const Mesh blob = make_random_blob(3, 2);
    const SpatialGrid grid(blob.vertices, 1e-6);
    const auto hits = ball_neighborhood(blob.vertices, grid, 7, 1e-6);
    CHECK(hits == std::vector<int>{7});
}

TEST_CASE("ball neighborhood: radius beyond the bbox returns every vertex") {
    const Mesh blob = make_random_blob(5, 1);
    const SpatialGrid grid(blob.vertices, 100.0);
    const auto hits = ball_neighborhood(blob.vertices, grid, 0, 100.0);
    CHECK(static_cast<int>(hits.size()) == blob.vertex_count());
}

TEST_CASE("ball neighborhood equals the brute-force scan on random clouds") {
    SplitMix64 gen(99);
    std::vector<Vec3> cloud;
    for (int i = 0; i < 50; ++i)
        cloud.push_back({gen.next_in(-1, 1), gen.next_in(-1, 1), gen.next_in(-1, 1)});
    const SpatialGrid grid(cloud, 0.3);
    for (int v = 0; v < 50; ++v) {
        const auto fast = grid.query(cloud[static_cast<std::size_t>(v)], 0.3);
        const std::set<int> got(fast.begin(), fast.end());
        CHECK(got == brute_ball(cloud, v, 0.3));
        CHECK(fast.size() == got.size());  // no duplicates
    }
    // Query radius smaller than the cell size stays exact too.
    for (int v = 0; v < 50; ++v) {
        const auto fast = grid.query(cloud[static_cast<std::size_t>(v)], 0.11);
        const std::set<int> got(fast.begin(), fast.end());
        CHECK(got == brute_ball(cloud, v, 0.11));
    }
}

TEST_CASE("gaussian weighted curvature of a constant field is that constant") {
    const Mesh blob = make_random_blob(7, 2);
    const SpatialGrid grid(blob.vertices, 0.4);
    const std::vector<double> field(blob.vertices.size(), 3.25);
    CHECK(gaussian_weighted_curvature(blob.vertices, grid, field, 11, 0.2) ==
          doctest::Approx(3.25).epsilon(1e-12));
}

TEST_CASE("gaussian weighted curvature of a singleton neighborhood") {
    std::vector<Vec3> points = {{0, 0, 0}, {10, 0, 0}};
    const SpatialGrid grid(points, 1.0);
    const std::vector<double> field = {0.7, -4.0};
    CHECK(gaussian_weighted_curvature(points, grid, field, 0, 0.5) == doctest::Approx(0.7));
}

TEST_CASE("gaussian weighted curvature: two vertices at distance sigma") {
    // Weight of the far vertex is exp(-1/2); hand evaluation gives
    // exp(-0.5) / (1 + exp(-0.5)) = 0.37754066879814546 when the center has
    // curvature 0 and the neighbor 1.
    std::vector<Vec3> points = {{0, 0, 0}, {0.5, 0, 0}};
    const SpatialGrid grid(points, 2.0);
    const std::vector<double> field = {0.0, 1.0};
    CHECK(gaussian_weighted_curvature(points, grid, field, 0, 0.5) ==
          doctest::Approx(0.37754066879814546).epsilon(1e-14));
}

TEST_CASE("icosphere saliency is near zero after curvature normalization") {
    const Mesh sphere = make_icosphere(3);
    const MeshGeometry g = compute_geometry(sphere);
    const auto curv = taubin_mean_curvature(sphere, g);
    double mean_abs = 0.0;
    for (const double k : curv.mean) mean_abs += std::fabs(k);
    mean_abs /= static_cast<double>(curv.mean.size());
    // The averaging windows must dominate the valence pattern of the
    // discrete curvature estimate for the symmetry to show.
    SaliencyParams params{0.10 * g.bbox_diag, 0.7};
    const SaliencyMap map = compute_saliency(sphere, g, params);
    const double max_score = *std::max_element(map.scores.begin(), map.scores.end());
    CHECK(max_score / mean_abs < 1e-3);
}

TEST_CASE("saliency is invariant under rigid motion") {
    const Mesh blob = make_random_blob(13, 2);
    const MeshGeometry g0 = compute_geometry(blob);
    SaliencyParams params{0.03 * g0.bbox_diag, 0.7};
    const SaliencyMap before = compute_saliency(blob, g0, params);

    Mesh moved = blob;
    const Mat3 rot = testsupport::rotation_xyz(0.7, -0.2, 1.9);
    for (auto& v : moved.vertices) v = rot * v + Vec3{4.0, -2.0, 7.5};
    const MeshGeometry g1 = compute_geometry(moved);
    // Rigid motion preserves absolute lengths but not the axis-aligned
    // bounding box, so the scale parameter carries over as-is.
    SaliencyParams params1{params.sigma, 0.7};
    const SaliencyMap after = compute_saliency(moved, g1, params1);

    double scale = 0.0;
    for (const double s : before.scores) scale = std::max(scale, std::fabs(s));
    for (std::size_t i = 0; i < before.scores.size(); ++i)
        CHECK(std::fabs(after.scores[i] - before.scores[i]) <= 1e-6 * scale);
}

TEST_CASE("saliency matches the brute-force evaluation to 1e-12") {
    // 20-vertex mesh: a tiny random blob.
    const Mesh tiny = make_random_blob(17, 0);  // 12 vertices (icosahedron base)
    const MeshGeometry g = compute_geometry(tiny);
    const auto curv = taubin_mean_curvature(tiny, g);
    const double sigma = 0.25 * g.bbox_diag;
    const auto expected = brute_saliency(tiny, curv.mean, sigma);
    SaliencyParams params{sigma, 1.0};
    const SaliencyMap map = compute_saliency(tiny, g, params);
    for (std::size_t i = 0; i < expected.size(); ++i)
        CHECK(map.scores[i] == doctest::Approx(expected[i]).epsilon(1e-12));
}

TEST_CASE("saliency scores are permuted exactly under element reordering") {
    const Mesh blob = make_random_blob(19, 2);
    const MeshGeometry g0 = compute_geometry(blob);
    SaliencyParams params{0.04 * g0.bbox_diag, 0.7};
    const SaliencyMap before = compute_saliency(blob, g0, params);

    SplitMix64 gen(5);
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
        std::rotate(nf.begin(), nf.begin() + static_cast<int>(gen.next_below(3)), nf.end());
        permuted.faces.push_back(nf);
    }
    // Face storage order is irrelevant too; rotate the list.
    std::rotate(permuted.faces.begin(), permuted.faces.begin() + 17, permuted.faces.end());

    const MeshGeometry g1 = compute_geometry(permuted);
    SaliencyParams params1{0.04 * g1.bbox_diag, 0.7};
    const SaliencyMap after = compute_saliency(permuted, g1, params1);
    for (int old = 0; old < blob.vertex_count(); ++old)
        CHECK(after.scores[static_cast<std::size_t>(perm[static_cast<std::size_t>(old)])] ==
              before.scores[static_cast<std::size_t>(old)]);
}

TEST_CASE("salient set is stable under uniform scaling with proportional sigma") {
    const Mesh blob = make_random_blob(23, 2);
    const MeshGeometry g0 = compute_geometry(blob);
    SaliencyParams p0{0.03 * g0.bbox_diag, 0.7};
    const SaliencyMap before = compute_saliency(blob, g0, p0);

    Mesh scaled = blob;
    for (auto& v : scaled.vertices) v = v * 5.25;
    const MeshGeometry g1 = compute_geometry(scaled);
    SaliencyParams p1{0.03 * g1.bbox_diag, 0.7};
    const SaliencyMap after = compute_saliency(scaled, g1, p1);

    std::set<int> a(before.salient.begin(), before.salient.end());
    std::set<int> b(after.salient.begin(), after.salient.end());
    CHECK(a == b);
}

TEST_CASE("select_salient keeps everything at fraction 1") {
    const std::vector<double> scores = {0.5, 0.1, 0.9};
    CHECK(select_salient(scores, 1.0).size() == 3);
}

TEST_CASE("select_salient count follows the rounding rule") {
    std::vector<double> scores(10);
    for (std::size_t i = 0; i < 10; ++i) scores[i] = static_cast<double>(i);
    const auto picked = select_salient(scores, 0.70);
    CHECK(picked.size() == 7);
    CHECK(picked.front() == 9);  // descending by score
}

TEST_CASE("equal scores break ties by ascending vertex index") {
    const std::vector<double> scores(10, 1.0);
    const auto picked = select_salient(scores, 0.7);
    CHECK(picked == std::vector<int>{0, 1, 2, 3, 4, 5, 6});
}

TEST_CASE("saliency csv export") {
    SaliencyMap map;
    map.scores = {0.25, 1.5};
    const std::string csv = saliency_scores_csv(map);
    CHECK(csv == "vertex_index,score\n0,0.25\n1,1.5\n");
}
