#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <filesystem>
#include <numeric>

#include "doctest.h"
#include "meshwm/attacks.hpp"
#include "meshwm/errors.hpp"
#include "meshwm/meshgen.hpp"
#include "meshwm/metrics.hpp"
#include "meshwm/prng.hpp"
#include "meshwm/watermark.hpp"
#include "support/test_meshes.hpp"

using namespace meshwm;
using testsupport::make_random_blob;

namespace {

WatermarkKey bench_key(std::uint64_t key1 = 77) {
    WatermarkKey key;
    key.key1 = key1;
    key.mode = QStepMode::Adaptive;
    key.lambda = 50.0;
    key.gamma = 0.9;
    key.sigma_rel = 0.02;
    return key;
}

std::filesystem::path temp_dir() {
    const auto dir = std::filesystem::temp_directory_path() / "meshwm_watermark_tests";
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("embed then extract returns the exact bits with correlation 1") {
    const Mesh mesh = make_random_blob(101, 3);
    const WatermarkKey key = bench_key();
    const Watermark wm = random_watermark(16, 5);
    const auto embedded = embed(mesh, key, wm);
    const auto extracted = extract(embedded.mesh, key, 16);
    CHECK(extracted.watermark.bits == wm.bits);
    CHECK(correlation(wm.bits, extracted.watermark.bits).value == doctest::Approx(1.0));
}

TEST_CASE("round trip holds across gammas above the half boundary") {
    // At gamma exactly 0.5 a worst-case residual sits on the decision
    // boundary; anything strictly above leaves a margin.
    const Mesh mesh = make_random_blob(103, 3);
    for (const double gamma : {0.6, 0.75, 1.0}) {
        WatermarkKey key = bench_key(900 + static_cast<std::uint64_t>(gamma * 100));
        key.gamma = gamma;
        const Watermark wm = random_watermark(16, 7);
        const auto embedded = embed(mesh, key, wm);
        const auto extracted = extract(embedded.mesh, key, 16);
        CHECK(extracted.watermark.bits == wm.bits);
    }
}

TEST_CASE("radial displacement is bounded by gamma times the step") {
    const Mesh mesh = make_random_blob(105, 3);
    WatermarkKey key = bench_key();
    key.gamma = 0.5;
    const Watermark wm = random_watermark(32, 9);
    const auto embedded = embed(mesh, key, wm);
    CHECK(embedded.report.max_displacement <= key.gamma * embedded.report.q_step + 1e-15);
    CHECK(embedded.report.max_displacement > 0.0);
}

TEST_CASE("embedding is deterministic") {
    const Mesh mesh = make_random_blob(107, 2);
    const WatermarkKey key = bench_key();
    const Watermark wm = random_watermark(16, 11);
    const auto a = embed(mesh, key, wm);
    const auto b = embed(mesh, key, wm);
    CHECK(a.mesh.vertices == b.mesh.vertices);
    CHECK(a.report.q_step == b.report.q_step);
}

TEST_CASE("salient count on the cat-sized fixture follows the 70% rule") {
    const Mesh cat = make_fixture("catsized");
    REQUIRE(cat.vertex_count() == 3534);
    const WatermarkKey key = bench_key();
    const Watermark wm = random_watermark(64, 13);
    const auto embedded = embed(cat, key, wm);
    CHECK(embedded.report.salient_count == 2474);  // round(0.7 * 3534)
    const int total =
        std::accumulate(embedded.report.repetitions.begin(), embedded.report.repetitions.end(), 0);
    CHECK(total == embedded.report.modified_count);
    CHECK(embedded.report.modified_count + embedded.report.skipped_count == 2474);
}

TEST_CASE("strict mode rejects payloads beyond the salient capacity") {
    const Mesh tiny = make_icosphere(1);  // 42 vertices -> 29 salient
    const WatermarkKey key = bench_key();
    const Watermark wm = random_watermark(64, 15);
    CHECK_THROWS_AS(embed(tiny, key, wm, /*strict=*/true), CapacityError);
    CHECK_NOTHROW(embed(tiny, key, wm, /*strict=*/false));
}

TEST_CASE("embedding rejects bad inputs") {
    const Mesh mesh = make_random_blob(109, 1);
    const WatermarkKey key = bench_key();
    Watermark empty;
    CHECK_THROWS_AS(embed(mesh, key, empty), Error);
    Watermark bad;
    bad.bits = {0, 1, 2};
    CHECK_THROWS_AS(embed(mesh, key, bad), ParseError);
    WatermarkKey bad_key = key;
    bad_key.gamma = 0.0;
    CHECK_THROWS_AS(embed(mesh, bad_key, random_watermark(8, 1)), Error);
    CHECK_THROWS_AS(extract(mesh, key, 0), Error);
}

TEST_CASE("element reordering leaves extraction bit-identical") {
    const Mesh mesh = make_random_blob(111, 3);
    const WatermarkKey key = bench_key();
    const Watermark wm = random_watermark(16, 17);
    const auto embedded = embed(mesh, key, wm);
    const auto baseline = extract(embedded.mesh, key, 16);
    for (const std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        const Mesh shuffled = reorder_elements(embedded.mesh, seed);
        const auto extracted = extract(shuffled, key, 16);
        CHECK(extracted.watermark.bits == baseline.watermark.bits);
        CHECK(extracted.watermark.bits == wm.bits);
    }
}

TEST_CASE("similarity transforms leave the extracted bits identical") {
    const Mesh mesh = make_random_blob(113, 3);
    const WatermarkKey key = bench_key();
    const Watermark wm = random_watermark(16, 19);
    const auto embedded = embed(mesh, key, wm);
    SplitMix64 gen(23);
    for (int draw = 0; draw < 3; ++draw) {
        const Mesh moved = random_similarity(embedded.mesh, gen.next_u64());
        const auto extracted = extract(moved, key, 16);
        CHECK(extracted.watermark.bits == wm.bits);
    }
}

TEST_CASE("fixed-step mode round-trips and keeps the configured step") {
    const Mesh mesh = make_random_blob(115, 3);
    const MeshGeometry g = compute_geometry(mesh);
    WatermarkKey key = bench_key();
    key.mode = QStepMode::Fixed;
    // Pick a sensible absolute step for this mesh scale.
    double mean_norm = 0.0;
    for (const double r : g.radial_norms) mean_norm += r;
    mean_norm /= static_cast<double>(g.radial_norms.size());
    key.q_step = mean_norm / 50.0;
    const Watermark wm = random_watermark(16, 21);
    const auto embedded = embed(mesh, key, wm);
    CHECK(embedded.report.q_step == key.q_step);
    const auto extracted = extract(embedded.mesh, key, 16);
    CHECK(extracted.watermark.bits == wm.bits);
}

TEST_CASE("sync order is deterministic and geometry-keyed") {
    const Mesh mesh = make_random_blob(117, 2);
    const MeshGeometry g = compute_geometry(mesh);
    std::vector<int> salient(static_cast<std::size_t>(mesh.vertex_count()));
    std::iota(salient.begin(), salient.end(), 0);
    const auto order1 = build_sync_order(mesh, g, salient);
    const auto order2 = build_sync_order(mesh, g, salient);
    CHECK(order1 == order2);
    // Descending normal norms.
    for (std::size_t i = 0; i + 1 < order1.size(); ++i)
        CHECK(g.vertex_normal_norms[static_cast<std::size_t>(order1[i])] >=
              g.vertex_normal_norms[static_cast<std::size_t>(order1[i + 1])]);
}

TEST_CASE("extract report carries vote margins") {
    const Mesh mesh = make_random_blob(119, 3);
    const WatermarkKey key = bench_key();
    const Watermark wm = random_watermark(16, 25);
    const auto embedded = embed(mesh, key, wm);
    const auto extracted = extract(embedded.mesh, key, 16);
    const auto margins = extracted.report.margins();
    REQUIRE(margins.size() == 16);
    for (std::size_t j = 0; j < margins.size(); ++j) {
        CHECK(std::fabs(margins[j]) <= 1.0);
        // The sign of the margin matches the decoded bit.
        if (extracted.watermark.bits[j] == 1) CHECK(margins[j] > 0.0);
    }
    CHECK(extracted.report.csv_row().find(',') != std::string::npos);
}

TEST_CASE("wrong key1 decodes to noise") {
    const Mesh mesh = make_random_blob(121, 3);
    const WatermarkKey key = bench_key(4242);
    const Watermark wm = random_watermark(64, 27);
    const auto embedded = embed(mesh, key, wm);
    double mean_abs = 0.0;
    const int draws = 20;
    for (int i = 0; i < draws; ++i) {
        WatermarkKey wrong = key;
        wrong.key1 = 5000 + static_cast<std::uint64_t>(i);
        const auto extracted = extract(embedded.mesh, wrong, 64);
        mean_abs += std::fabs(correlation(wm.bits, extracted.watermark.bits).value);
    }
    CHECK(mean_abs / draws < 0.25);  // the full statistical band is in the acceptance suite
}

TEST_CASE("guard band shrinks the carrier set symmetrically") {
    const Mesh mesh = make_random_blob(123, 3);
    WatermarkKey key = bench_key();
    key.guard_band = 0.10;
    const Watermark wm = random_watermark(16, 29);
    const auto embedded = embed(mesh, key, wm);
    const auto full = embed(mesh, bench_key(), wm);
    CHECK(embedded.report.salient_count ==
          static_cast<int>(std::llround(0.9 * full.report.salient_count)));
    const auto extracted = extract(embedded.mesh, key, 16);
    CHECK(extracted.watermark.bits == wm.bits);
    CHECK(extracted.report.salient_count == embedded.report.salient_count);
}

TEST_CASE("watermark files hold one line of bits") {
    const auto path = (temp_dir() / "wm.txt").string();
    const Watermark wm = random_watermark(32, 31);
    save_watermark(wm, path);
    const Watermark back = load_watermark(path);
    CHECK(back.bits == wm.bits);
    CHECK_THROWS_AS(parse_watermark("0110x01"), ParseError);
    CHECK_THROWS_AS(parse_watermark("  \n"), ParseError);
    CHECK(parse_watermark("01 10\n").bits == std::vector<int>{0, 1, 1, 0});
}

TEST_CASE("key files round-trip") {
    const auto path = (temp_dir() / "key.txt").string();
    WatermarkKey key = bench_key(9876543210ULL);
    key.guard_band = 0.05;
    save_key(key, path);
    const WatermarkKey back = load_key(path);
    CHECK(back.key1 == key.key1);
    CHECK(back.mode == key.mode);
    CHECK(back.lambda == doctest::Approx(key.lambda));
    CHECK(back.gamma == doctest::Approx(key.gamma));
    CHECK(back.salient_fraction == doctest::Approx(key.salient_fraction));
    CHECK(back.sigma_rel == doctest::Approx(key.sigma_rel));
    CHECK(back.guard_band == doctest::Approx(key.guard_band));

    WatermarkKey fixed = key;
    fixed.mode = QStepMode::Fixed;
    fixed.q_step = 0.08;
    save_key(fixed, path);
    const WatermarkKey fixed_back = load_key(path);
    CHECK(fixed_back.mode == QStepMode::Fixed);
    CHECK(fixed_back.q_step == doctest::Approx(0.08));
}

TEST_CASE("key file parsing names bad lines") {
    CHECK_THROWS_AS(parse_key("mode = sideways\n"), ParseError);
    CHECK_THROWS_AS(parse_key("key1 = 1\n"), ParseError);  // missing mode
    CHECK_THROWS_AS(parse_key("mode = fixed\nwhatever = 3\n"), ParseError);
    CHECK_THROWS_AS(parse_key("mode = fixed\ngamma = high\n"), ParseError);
    const WatermarkKey key = parse_key("# comment\nmode = adaptive\nlambda = 42\n");
    CHECK(key.lambda == doctest::Approx(42.0));
}

TEST_CASE("embed report notes uncovered payload bits on narrow meshes") {
    // A mesh with a tiny radial spread cannot address a wide payload.
    const Mesh sphere = make_icosphere(3);  // nearly constant radius
    const WatermarkKey key = bench_key();
    const Watermark wm = random_watermark(64, 33);
    const auto embedded = embed(sphere, key, wm);
    CHECK(embedded.report.uncovered_bits > 0);
    CHECK(embedded.report.csv_row().find(',') != std::string::npos);
}
