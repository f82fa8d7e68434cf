#include "meshwm/watermark.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "meshwm/errors.hpp"
#include "meshwm/prng.hpp"

namespace meshwm {

void WatermarkKey::validate() const {
    if (!(gamma > 0.0) || gamma > 1.0) throw Error("gamma must be in (0, 1]");
    if (!(salient_fraction > 0.0) || salient_fraction > 1.0)
        throw Error("salient fraction must be in (0, 1]");
    if (mode == QStepMode::Fixed && !(q_step > 0.0)) throw Error("q_step must be positive");
    if (mode == QStepMode::Adaptive && !(lambda > 0.0)) throw Error("lambda must be positive");
    if (!(sigma_rel > 0.0)) throw Error("sigma_rel must be positive");
    if (guard_band < 0.0 || guard_band >= 1.0) throw Error("guard_band must be in [0, 1)");
}

std::vector<int> build_sync_order(const Mesh& mesh, const MeshGeometry& geometry,
                                  const std::vector<int>& salient) {
    std::vector<int> order = salient;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const auto ia = static_cast<std::size_t>(a);
        const auto ib = static_cast<std::size_t>(b);
        if (geometry.vertex_normal_norms[ia] != geometry.vertex_normal_norms[ib])
            return geometry.vertex_normal_norms[ia] > geometry.vertex_normal_norms[ib];
        if (geometry.radial_norms[ia] != geometry.radial_norms[ib])
            return geometry.radial_norms[ia] > geometry.radial_norms[ib];
        const Vec3& pa = mesh.vertices[ia];
        const Vec3& pb = mesh.vertices[ib];
        if (pa != pb) return lex_less(pa, pb);
        return a < b;
    });
    return order;
}

namespace {

// Everything both sides of the blind channel must agree on.
struct PipelineState {
    MeshGeometry geometry;
    SaliencyMap saliency;
    std::vector<int> carriers;  // salient set after the optional guard band
    std::vector<int> sync_order;
    double q_step = 0.0;
    double dither = 0.0;  // codebook offset, in [0, q_step)
};

PipelineState prepare(const Mesh& mesh, const WatermarkKey& key) {
    key.validate();
    if (mesh.vertex_count() < 4) throw Error("watermark pipeline needs at least 4 vertices");

    PipelineState st;
    st.geometry = compute_geometry(mesh, /*allow_degenerate=*/true);

    SaliencyParams params;
    params.sigma = key.sigma_rel * st.geometry.bbox_diag;
    params.salient_fraction = key.salient_fraction;
    st.saliency = compute_saliency(mesh, st.geometry, params);

    st.carriers = st.saliency.salient;
    if (key.guard_band > 0.0) {
        // Drop the low-score end of the selected band; both embedder and
        // extractor apply the same deterministic shrink.
        const auto keep = static_cast<std::size_t>(std::llround(
            (1.0 - key.guard_band) * static_cast<double>(st.carriers.size())));
        st.carriers.resize(std::min(st.carriers.size(), keep));
    }
    st.sync_order = build_sync_order(mesh, st.geometry, st.carriers);

    st.q_step = quantization_step(st.geometry, key.mode, key.q_step, key.lambda);
    st.dither = derive_dither(key.key1, 1, st.q_step)[0];
    return st;
}

// The codebook cell of a radial norm: cell z spans
//   [z*Q + t - Q/4, z*Q + t + 3Q/4)
// and contains exactly the two codewords z*Q + t (bit 0) and z*Q + t + Q/2
// (bit 1), each a quarter step away from the cell walls. The payload bit
// carried by a vertex is its cell index modulo m, so bit assignment and bit
// value are recovered by the same nearest-codeword decode and survive
// exactly the perturbations the codebook itself survives. Cells below the
// first admissible codeword clamp to cell 0.
long long cell_of(double value, double q_step, double dither) {
    const auto z = static_cast<long long>(std::floor((value - dither) / q_step + 0.25));
    const auto z_min = static_cast<long long>(std::ceil(-dither / q_step));
    return std::max(z, z_min);
}

int slot_of_cell(long long cell, int m) {
    const long long r = cell % m;
    return static_cast<int>(r < 0 ? r + m : r);
}

}  // namespace

EmbedResult embed(const Mesh& mesh, const WatermarkKey& key, const Watermark& watermark,
                  bool strict) {
    const int m = watermark.length();
    if (m < 1) throw Error("watermark must carry at least one bit");
    for (const int b : watermark.bits)
        if (b != 0 && b != 1) throw ParseError("watermark bits must be 0 or 1");

    const PipelineState st = prepare(mesh, key);
    if (st.carriers.empty()) throw CapacityError("no salient vertices to embed into");
    if (strict && static_cast<int>(st.carriers.size()) < m)
        throw CapacityError("salient set (" + std::to_string(st.carriers.size()) +
                            ") smaller than payload (" + std::to_string(m) + ")");

    EmbedReport report;
    report.q_step = st.q_step;
    report.salient_count = static_cast<int>(st.carriers.size());
    report.repetitions.assign(static_cast<std::size_t>(m), 0);

    std::vector<std::pair<int, double>> new_norms;
    new_norms.reserve(st.sync_order.size());
    const auto z_min = static_cast<long long>(std::ceil(-st.dither / st.q_step));
    for (const int v : st.sync_order) {
        const double x = st.geometry.radial_norms[static_cast<std::size_t>(v)];
        const long long cell = cell_of(x, st.q_step, st.dither);

        // Candidate codewords: the own cell always offers both labels, so a
        // consistent target exists within 3Q/4; a neighboring cell's
        // codeword is taken instead when it is nearer and its own slot/mask
        // ask for the label it carries. Extraction decodes the cell the
        // value actually sits in, so any consistent choice round-trips.
        double best_u = 0.0;
        long long best_cell = cell;
        int best_slot = 0;
        bool found = false;
        for (long long c = std::max(cell - 1, z_min); c <= cell + 1; ++c) {
            const int slot = slot_of_cell(c, m);
            const int raw = watermark.bits[static_cast<std::size_t>(slot)] ^ cell_mask(key.key1, c);
            const double u =
                static_cast<double>(c) * st.q_step + st.dither + raw * st.q_step * 0.5;
            if (u < 0.0) continue;
            if (!found || std::fabs(u - x) < std::fabs(best_u - x) ||
                (std::fabs(u - x) == std::fabs(best_u - x) && u < best_u)) {
                // Only candidates the embedder may legally use: inside the
                // spec displacement budget of one quantization step.
                if (std::fabs(u - x) <= st.q_step) {
                    best_u = u;
                    best_cell = c;
                    best_slot = slot;
                    found = true;
                }
            }
        }
        if (!found) {  // only possible hard against the u >= 0 clamp
            ++report.skipped_count;
            continue;
        }
        const double moved = quantize_value(x, best_u, key.gamma);
        new_norms.push_back({v, moved});
        (void)best_cell;
        ++report.repetitions[static_cast<std::size_t>(best_slot)];
        report.max_displacement = std::max(report.max_displacement, std::fabs(moved - x));
    }
    report.modified_count = static_cast<int>(new_norms.size());
    for (const int reps : report.repetitions)
        if (reps == 0) ++report.uncovered_bits;

    auto reconstructed = reconstruct_from_norms(mesh, st.geometry, new_norms);
    report.skipped_count += static_cast<int>(reconstructed.skipped.size());

    // Embedding moves geometry, so the extractor's salient set can drift;
    // measure the agreement and report it.
    {
        const MeshGeometry geom_after = compute_geometry(reconstructed.mesh, true);
        SaliencyParams params;
        params.sigma = key.sigma_rel * geom_after.bbox_diag;
        params.salient_fraction = key.salient_fraction;
        const SaliencyMap after = compute_saliency(reconstructed.mesh, geom_after, params);
        std::vector<int> before_sorted = st.saliency.salient;
        std::vector<int> after_sorted = after.salient;
        std::sort(before_sorted.begin(), before_sorted.end());
        std::sort(after_sorted.begin(), after_sorted.end());
        std::vector<int> common;
        std::set_intersection(before_sorted.begin(), before_sorted.end(), after_sorted.begin(),
                              after_sorted.end(), std::back_inserter(common));
        report.salient_overlap = before_sorted.empty()
                                     ? 1.0
                                     : static_cast<double>(common.size()) /
                                           static_cast<double>(before_sorted.size());
    }

    return {std::move(reconstructed.mesh), std::move(report)};
}

ExtractResult extract(const Mesh& mesh, const WatermarkKey& key, int m) {
    if (m < 1) throw Error("watermark length must be at least 1");
    const PipelineState st = prepare(mesh, key);
    if (st.carriers.empty()) throw EmptySalientSet("extraction found no salient vertices");

    ExtractReport report;
    report.q_step = st.q_step;
    report.salient_count = static_cast<int>(st.carriers.size());
    report.votes_zero.assign(static_cast<std::size_t>(m), 0);
    report.votes_one.assign(static_cast<std::size_t>(m), 0);

    for (const int v : st.sync_order) {
        const double x = st.geometry.radial_norms[static_cast<std::size_t>(v)];
        const long long cell = cell_of(x, st.q_step, st.dither);
        const int slot = slot_of_cell(cell, m);
        const Codeword cw = nearest_codeword(x, st.q_step, st.dither);
        if ((cw.bit ^ cell_mask(key.key1, cell)) == 0)
            ++report.votes_zero[static_cast<std::size_t>(slot)];
        else
            ++report.votes_one[static_cast<std::size_t>(slot)];
    }

    Watermark wm;
    wm.bits.resize(static_cast<std::size_t>(m));
    for (std::size_t j = 0; j < wm.bits.size(); ++j)
        wm.bits[j] = report.votes_one[j] > report.votes_zero[j] ? 1 : 0;  // tie -> 0
    return {std::move(wm), std::move(report)};
}

std::vector<double> ExtractReport::margins() const {
    std::vector<double> out(votes_zero.size(), 0.0);
    for (std::size_t j = 0; j < out.size(); ++j) {
        const int total = votes_zero[j] + votes_one[j];
        out[j] = static_cast<double>(votes_one[j] - votes_zero[j]) / std::max(total, 1);
    }
    return out;
}

// --- reports as CSV ----------------------------------------------------------

namespace {

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

}  // namespace

std::string EmbedReport::csv_header() const {
    return "q_step,salient_count,modified_count,skipped_count,uncovered_bits,"
           "max_displacement,salient_overlap,min_repetition,max_repetition";
}

std::string EmbedReport::csv_row() const {
    int min_rep = 0, max_rep = 0;
    if (!repetitions.empty()) {
        min_rep = *std::min_element(repetitions.begin(), repetitions.end());
        max_rep = *std::max_element(repetitions.begin(), repetitions.end());
    }
    std::ostringstream out;
    out << fmt(q_step) << "," << salient_count << "," << modified_count << "," << skipped_count
        << "," << uncovered_bits << "," << fmt(max_displacement) << "," << fmt(salient_overlap)
        << "," << min_rep << "," << max_rep;
    return out.str();
}

std::string ExtractReport::csv_header() const {
    return "q_step,salient_count,min_abs_margin,mean_abs_margin";
}

std::string ExtractReport::csv_row() const {
    const auto ms = margins();
    double min_abs = ms.empty() ? 0.0 : 2.0;
    double sum_abs = 0.0;
    for (const double m : ms) {
        min_abs = std::min(min_abs, std::fabs(m));
        sum_abs += std::fabs(m);
    }
    std::ostringstream out;
    out << fmt(q_step) << "," << salient_count << "," << fmt(min_abs) << ","
        << fmt(ms.empty() ? 0.0 : sum_abs / static_cast<double>(ms.size()));
    return out.str();
}

// --- file formats ------------------------------------------------------------

Watermark parse_watermark(const std::string& text) {
    Watermark wm;
    for (const char c : text) {
        if (c == '0')
            wm.bits.push_back(0);
        else if (c == '1')
            wm.bits.push_back(1);
        else if (c == '\n' || c == '\r' || c == ' ' || c == '\t')
            continue;
        else
            throw ParseError(std::string("watermark file: invalid character '") + c + "'");
    }
    if (wm.bits.empty()) throw ParseError("watermark file holds no bits");
    return wm;
}

Watermark load_watermark(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_watermark(ss.str());
}

void save_watermark(const Watermark& wm, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    for (const int b : wm.bits) out << (b ? '1' : '0');
    out << "\n";
    if (!out.flush()) throw IoError("write failed for " + path);
}

WatermarkKey parse_key(const std::string& text) {
    WatermarkKey key;
    std::istringstream lines(text);
    std::string line;
    long line_no = 0;
    bool mode_seen = false;
    while (std::getline(lines, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        std::string name, value;
        if (eq == std::string::npos) {
            std::istringstream probe(line);
            std::string leftover;
            if (probe >> leftover)
                throw ParseError("key file line " + std::to_string(line_no) +
                                 ": expected name = value");
            continue;
        }
        name = line.substr(0, eq);
        value = line.substr(eq + 1);
        auto trim = [](std::string& s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            s = b == std::string::npos ? "" : s.substr(b, e - b + 1);
        };
        trim(name);
        trim(value);
        const std::string where = "key file line " + std::to_string(line_no);
        try {
            if (name == "key1")
                key.key1 = std::stoull(value);
            else if (name == "mode") {
                if (value == "fixed")
                    key.mode = QStepMode::Fixed;
                else if (value == "adaptive")
                    key.mode = QStepMode::Adaptive;
                else
                    throw ParseError(where + ": mode must be fixed or adaptive");
                mode_seen = true;
            } else if (name == "q_step")
                key.q_step = std::stod(value);
            else if (name == "lambda")
                key.lambda = std::stod(value);
            else if (name == "gamma")
                key.gamma = std::stod(value);
            else if (name == "fraction")
                key.salient_fraction = std::stod(value);
            else if (name == "sigma_rel")
                key.sigma_rel = std::stod(value);
            else if (name == "guard_band")
                key.guard_band = std::stod(value);
            else
                throw ParseError(where + ": unknown key '" + name + "'");
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception&) {
            throw ParseError(where + ": bad value '" + value + "' for " + name);
        }
    }
    if (!mode_seen) throw ParseError("key file: missing 'mode'");
    key.validate();
    return key;
}

WatermarkKey load_key(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_key(ss.str());
}

void save_key(const WatermarkKey& key, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << "key1 = " << key.key1 << "\n";
    out << "mode = " << (key.mode == QStepMode::Fixed ? "fixed" : "adaptive") << "\n";
    if (key.mode == QStepMode::Fixed)
        out << "q_step = " << fmt(key.q_step) << "\n";
    else
        out << "lambda = " << fmt(key.lambda) << "\n";
    out << "gamma = " << fmt(key.gamma) << "\n";
    out << "fraction = " << fmt(key.salient_fraction) << "\n";
    out << "sigma_rel = " << fmt(key.sigma_rel) << "\n";
    out << "guard_band = " << fmt(key.guard_band) << "\n";
    if (!out.flush()) throw IoError("write failed for " + path);
}

Watermark random_watermark(int m, std::uint64_t seed) {
    SplitMix64 gen(seed);
    Watermark wm;
    wm.bits.reserve(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) wm.bits.push_back(static_cast<int>(gen.next_u64() & 1ULL));
    return wm;
}

}  // namespace meshwm
