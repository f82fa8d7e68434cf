#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "meshwm/mesh.hpp"
#include "meshwm/saliency.hpp"
#include "meshwm/scs.hpp"

namespace meshwm {

/// Shared secret material. key1 seeds the dither generator; in fixed mode
/// q_step is the second secret (key2), in adaptive mode the step is
/// re-derived blindly from the mesh as sqrt(N_av) / lambda.
struct WatermarkKey {
    std::uint64_t key1 = 1;
    QStepMode mode = QStepMode::Adaptive;
    double q_step = 0.08;          // fixed mode only
    double lambda = 50.0;          // adaptive mode only
    double gamma = 0.5;            // embedding strength in (0, 1]
    double salient_fraction = 0.70;
    double sigma_rel = 0.003;      // saliency fine scale / bbox diagonal
    double guard_band = 0.0;       // fraction of the salient band's low end dropped

    void validate() const;
};

struct Watermark {
    std::vector<int> bits;  // each 0 or 1

    int length() const { return static_cast<int>(bits.size()); }
};

/// Salient vertices sorted by descending vertex-normal norm; ties break by
/// descending radial norm, then ascending lexicographic position, so the
/// order is a pure function of geometry.
std::vector<int> build_sync_order(const Mesh& mesh, const MeshGeometry& geometry,
                                  const std::vector<int>& salient);

struct EmbedReport {
    double q_step = 0.0;           // realized quantization step
    int salient_count = 0;
    int modified_count = 0;
    int skipped_count = 0;         // vertices at the center (not radially movable)
    int uncovered_bits = 0;        // payload bits with zero carriers
    double max_displacement = 0.0; // max radial move, <= gamma * q_step
    double salient_overlap = 1.0;  // salient-set agreement with the output mesh
    std::vector<int> repetitions;  // carriers per payload bit

    std::string csv_header() const;
    std::string csv_row() const;
};

struct ExtractReport {
    double q_step = 0.0;
    int salient_count = 0;
    std::vector<int> votes_zero;  // per-bit tallies
    std::vector<int> votes_one;

    /// Signed vote margin per bit: (ones - zeros) / max(1, total).
    std::vector<double> margins() const;

    std::string csv_header() const;
    std::string csv_row() const;
};

struct EmbedResult {
    Mesh mesh;
    EmbedReport report;
};

struct ExtractResult {
    Watermark watermark;
    ExtractReport report;
};

/// Embeds the watermark into the radial norms of the salient vertices via
/// two-symbol SCS quantization. When strict is set, throws CapacityError if
/// the salient set is smaller than the payload.
EmbedResult embed(const Mesh& mesh, const WatermarkKey& key, const Watermark& watermark,
                  bool strict = false);

/// Blind extraction of an m-bit watermark: recomputes saliency, step and
/// dither from the received mesh alone and majority-votes each payload bit.
ExtractResult extract(const Mesh& mesh, const WatermarkKey& key, int m);

// --- file formats -----------------------------------------------------------

/// Watermark file: a single ASCII line of '0'/'1' characters.
Watermark load_watermark(const std::string& path);
void save_watermark(const Watermark& wm, const std::string& path);
Watermark parse_watermark(const std::string& text);

/// Key file: plain "key = value" lines (key1, mode, q_step or lambda, gamma,
/// fraction, sigma_rel, guard_band).
WatermarkKey load_key(const std::string& path);
void save_key(const WatermarkKey& key, const std::string& path);
WatermarkKey parse_key(const std::string& text);

/// Deterministic random payload, for benchmarks and tests.
Watermark random_watermark(int m, std::uint64_t seed);

}  // namespace meshwm
