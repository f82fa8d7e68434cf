#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "meshwm/attacks.hpp"
#include "meshwm/watermark.hpp"

namespace meshwm {

/// Benchmark plan: plain text with a key=value header and [meshes], [key],
/// [attacks] sections. All randomness flows from the declared seeds.
struct BenchPlan {
    std::vector<std::string> mesh_paths;
    WatermarkKey key;
    int wm_length = 64;
    std::uint64_t wm_seed = 1;
    std::string wm_file;  // optional; overrides wm_length/wm_seed
    std::vector<std::string> attack_specs;
    std::string out_dir = "bench_out";
    int repetitions = 5;  // randomized attacks only; deterministic ones run once
    std::uint64_t seed = 1;
    double msdm_radius_rel = 0.005;
    int samples_per_face = 10;

    static BenchPlan parse(const std::string& text);
    static BenchPlan load(const std::string& path);
};

struct BenchOutcome {
    int rows = 0;
    int failures = 0;
    std::string results_path;
};

/// Runs the full grid (mesh x attack x repetition): embed once per mesh,
/// attack, blind-extract, score. Writes results.csv, per-attack-kind pivot
/// tables and gnuplot .dat curves into the plan's output directory; never
/// writes anywhere else. Partial failures are recorded per row and the run
/// continues.
BenchOutcome run_bench(const BenchPlan& plan, bool quiet);

}  // namespace meshwm
