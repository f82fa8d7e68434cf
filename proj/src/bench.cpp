#include "meshwm/bench.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "meshwm/errors.hpp"
#include "meshwm/mesh_io.hpp"
#include "meshwm/metrics.hpp"
#include "meshwm/prng.hpp"

namespace meshwm {

namespace {

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

std::string sanitize_for_csv(std::string s) {
    for (char& c : s)
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    return s;
}

std::string stem_of(const std::string& path) {
    return std::filesystem::path(path).stem().string();
}

}  // namespace

BenchPlan BenchPlan::parse(const std::string& text) {
    BenchPlan plan;
    std::string section;
    std::ostringstream key_section;
    std::istringstream lines(text);
    std::string line;
    long line_no = 0;
    while (std::getline(lines, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (t.front() == '[' && t.back() == ']') {
            section = t.substr(1, t.size() - 2);
            if (section != "meshes" && section != "key" && section != "attacks")
                throw ParseError("plan line " + std::to_string(line_no) + ": unknown section [" +
                                 section + "]");
            continue;
        }
        if (section == "meshes") {
            plan.mesh_paths.push_back(t);
        } else if (section == "key") {
            key_section << t << "\n";
        } else if (section == "attacks") {
            AttackSpec::parse(t);  // validate early
            plan.attack_specs.push_back(t);
        } else {
            const auto eq = t.find('=');
            if (eq == std::string::npos)
                throw ParseError("plan line " + std::to_string(line_no) + ": expected name = value");
            const std::string name = trim(t.substr(0, eq));
            const std::string value = trim(t.substr(eq + 1));
            try {
                if (name == "out_dir")
                    plan.out_dir = value;
                else if (name == "seed")
                    plan.seed = std::stoull(value);
                else if (name == "repetitions")
                    plan.repetitions = std::stoi(value);
                else if (name == "wm_length")
                    plan.wm_length = std::stoi(value);
                else if (name == "wm_seed")
                    plan.wm_seed = std::stoull(value);
                else if (name == "wm_file")
                    plan.wm_file = value;
                else if (name == "msdm_radius_rel")
                    plan.msdm_radius_rel = std::stod(value);
                else if (name == "samples_per_face")
                    plan.samples_per_face = std::stoi(value);
                else
                    throw ParseError("plan line " + std::to_string(line_no) + ": unknown option '" +
                                     name + "'");
            } catch (const ParseError&) {
                throw;
            } catch (const std::exception&) {
                throw ParseError("plan line " + std::to_string(line_no) + ": bad value '" + value +
                                 "'");
            }
        }
    }
    if (plan.mesh_paths.empty()) throw ParseError("plan: [meshes] section is empty");
    if (plan.repetitions < 1) throw ParseError("plan: repetitions must be >= 1");
    if (plan.wm_file.empty() && plan.wm_length < 16)
        throw ParseError("plan: wm_length must be >= 16 for meaningful correlation");
    plan.key = parse_key(key_section.str());
    return plan;
}

BenchPlan BenchPlan::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

namespace {

struct Row {
    std::string mesh_id;
    std::string attack;   // kind, or "embed" for the embedding-distortion row
    std::string params;
    int rep = 0;
    std::uint64_t seed = 0;
    std::string status = "ok";
    double q_step = 0.0;
    int salient_count = 0;
    MetricReport metrics;

    bool operator<(const Row& o) const {
        if (mesh_id != o.mesh_id) return mesh_id < o.mesh_id;
        if (attack != o.attack) return attack < o.attack;
        if (params != o.params) return params < o.params;
        return rep < o.rep;
    }
};

std::string row_csv(const Row& r) {
    std::ostringstream out;
    out << r.mesh_id << "," << r.attack << "," << r.params << "," << fmt(r.metrics.mrms) << ","
        << fmt(r.metrics.hausdorff) << "," << fmt(r.metrics.msdm) << ","
        << fmt(r.metrics.correlation) << "," << r.metrics.sample_count << "," << r.rep << ","
        << r.seed << "," << r.status << "," << fmt(r.q_step) << "," << r.salient_count;
    return out.str();
}

std::string attack_params(const std::string& spec_text) {
    const auto colon = spec_text.find(':');
    return colon == std::string::npos ? std::string("-") : spec_text.substr(colon + 1);
}

double attack_strength(const AttackSpec& spec) {
    if (spec.kind == "noise") return spec.amplitude;
    if (spec.kind == "smooth") return spec.iterations;
    if (spec.kind == "quant") return spec.bits;
    if (spec.kind == "crop") return spec.fraction;
    return 0.0;
}

}  // namespace

BenchOutcome run_bench(const BenchPlan& plan, bool quiet) {
    namespace fs = std::filesystem;
    fs::create_directories(plan.out_dir);

    const Watermark wm = plan.wm_file.empty() ? random_watermark(plan.wm_length, plan.wm_seed)
                                              : load_watermark(plan.wm_file);
    save_watermark(wm, (fs::path(plan.out_dir) / "watermark.txt").string());
    save_key(plan.key, (fs::path(plan.out_dir) / "key.txt").string());

    std::vector<Row> rows;
    std::vector<std::string> mesh_ids;

    for (const auto& path : plan.mesh_paths) {
        const std::string mesh_id = stem_of(path);
        mesh_ids.push_back(mesh_id);
        Mesh original;
        EmbedResult embedded;
        bool mesh_ok = true;

        SamplingParams sampling;
        sampling.samples_per_face = plan.samples_per_face;
        sampling.seed = mix_seed(plan.seed, hash_string(mesh_id));

        try {
            original = load_mesh(path);
            embedded = embed(original, plan.key, wm);

            Row base;
            base.mesh_id = mesh_id;
            base.attack = "embed";
            base.params = "-";
            base.seed = plan.seed;
            base.q_step = embedded.report.q_step;
            base.salient_count = embedded.report.salient_count;
            base.metrics.mrms = mrms(original, embedded.mesh, sampling);
            base.metrics.hausdorff = hausdorff(original, embedded.mesh, sampling);
            MsdmParams mp;
            mp.radius = 0.0;  // relative default resolved inside msdm
            base.metrics.msdm = msdm(original, embedded.mesh, mp);
            base.metrics.sample_count = sampling.total_for(original);
            const auto clean = extract(embedded.mesh, plan.key, wm.length());
            base.metrics.correlation = correlation(wm.bits, clean.watermark.bits).value;
            rows.push_back(base);
            if (!quiet)
                std::cerr << "[bench] " << mesh_id << " embed: corr=" << base.metrics.correlation
                          << " mrms=" << base.metrics.mrms << "\n";
        } catch (const std::exception& e) {
            mesh_ok = false;
            Row base;
            base.mesh_id = mesh_id;
            base.attack = "embed";
            base.params = "-";
            base.status = sanitize_for_csv(e.what());
            base.metrics.msdm = -1.0;
            rows.push_back(base);
            if (!quiet) std::cerr << "[bench] " << mesh_id << " embed FAILED: " << e.what() << "\n";
        }

        for (const auto& spec_text : plan.attack_specs) {
            const AttackSpec spec = AttackSpec::parse(spec_text);
            const int reps = spec.randomized() ? plan.repetitions : 1;
            for (int rep = 0; rep < reps; ++rep) {
                Row row;
                row.mesh_id = mesh_id;
                row.attack = spec.kind;
                row.params = attack_params(spec_text);
                row.rep = rep;
                row.seed = mix_seed(plan.seed, hash_string(mesh_id + "|" + spec_text) +
                                                   static_cast<std::uint64_t>(rep));
                if (!mesh_ok) {
                    row.status = "skipped: embed failed";
                    row.metrics.msdm = -1.0;
                    rows.push_back(row);
                    continue;
                }
                try {
                    const Mesh attacked =
                        spec.apply(embedded.mesh, spec.randomized() ? row.seed : 0);
                    const auto result = extract(attacked, plan.key, wm.length());
                    row.q_step = result.report.q_step;
                    row.salient_count = result.report.salient_count;
                    row.metrics.correlation = correlation(wm.bits, result.watermark.bits).value;
                    SamplingParams att_sampling = sampling;
                    att_sampling.seed = mix_seed(row.seed, 0xA77ACB);
                    row.metrics.mrms = mrms(embedded.mesh, attacked, att_sampling);
                    row.metrics.hausdorff = hausdorff(embedded.mesh, attacked, att_sampling);
                    row.metrics.msdm =
                        attacked.vertex_count() == embedded.mesh.vertex_count()
                            ? msdm(embedded.mesh, attacked, MsdmParams{})
                            : -1.0;
                    row.metrics.sample_count = att_sampling.total_for(embedded.mesh);
                } catch (const std::exception& e) {
                    row.status = sanitize_for_csv(e.what());
                    row.metrics.msdm = -1.0;
                }
                rows.push_back(row);
                if (!quiet)
                    std::cerr << "[bench] " << mesh_id << " " << spec_text << " rep " << rep
                              << ": corr=" << row.metrics.correlation << " (" << row.status
                              << ")\n";
            }
        }
    }

    std::sort(rows.begin(), rows.end());

    BenchOutcome outcome;
    outcome.rows = static_cast<int>(rows.size());
    for (const auto& r : rows)
        if (r.status != "ok") ++outcome.failures;

    // results.csv: the MetricReport columns first, then run bookkeeping.
    outcome.results_path = (fs::path(plan.out_dir) / "results.csv").string();
    {
        std::ofstream out(outcome.results_path, std::ios::binary);
        if (!out) throw IoError("cannot write " + outcome.results_path);
        out << MetricReport::csv_header() << ",rep,seed,status,q_step,salient_count\n";
        for (const auto& r : rows) out << row_csv(r) << "\n";
    }

    // Pivot tables: rows = attack level, columns = mesh, cells = mean (and
    // min) correlation over repetitions.
    std::map<std::string, std::vector<std::string>> kind_params;  // insertion-ordered via plan
    for (const auto& spec_text : plan.attack_specs) {
        const AttackSpec spec = AttackSpec::parse(spec_text);
        auto& list = kind_params[spec.kind];
        const std::string p = attack_params(spec_text);
        if (std::find(list.begin(), list.end(), p) == list.end()) list.push_back(p);
    }
    for (const auto& [kind, params_list] : kind_params) {
        std::ofstream pivot((fs::path(plan.out_dir) / ("pivot_" + kind + ".csv")).string(),
                            std::ios::binary);
        pivot << "params";
        for (const auto& id : mesh_ids) pivot << "," << id << "_mean," << id << "_min";
        pivot << "\n";
        std::ofstream dat;
        const bool numeric = kind == "noise" || kind == "smooth" || kind == "quant" || kind == "crop";
        if (numeric) {
            dat.open((fs::path(plan.out_dir) / (kind + ".dat")).string(), std::ios::binary);
            dat << "# " << kind << ": strength then mean correlation per mesh:";
            for (const auto& id : mesh_ids) dat << " " << id;
            dat << "\n";
        }
        for (const auto& p : params_list) {
            pivot << p;
            std::string dat_line;
            for (const auto& id : mesh_ids) {
                double sum = 0.0, mn = 2.0;
                int count = 0;
                for (const auto& r : rows) {
                    if (r.mesh_id != id || r.attack != kind || r.params != p || r.status != "ok")
                        continue;
                    sum += r.metrics.correlation;
                    mn = std::min(mn, r.metrics.correlation);
                    ++count;
                }
                if (count == 0) {
                    pivot << ",,";
                    dat_line += " nan";
                } else {
                    pivot << "," << fmt(sum / count) << "," << fmt(mn);
                    dat_line += " " + fmt(sum / count);
                }
            }
            pivot << "\n";
            if (numeric) {
                const AttackSpec spec = AttackSpec::parse(kind + ":" + p);
                dat << fmt(attack_strength(spec)) << dat_line << "\n";
            }
        }
    }
    return outcome;
}

}  // namespace meshwm
