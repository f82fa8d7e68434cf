#include "meshwm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "meshwm/curvature.hpp"
#include "meshwm/distance_index.hpp"
#include "meshwm/errors.hpp"
#include "meshwm/geometry.hpp"
#include "meshwm/prng.hpp"
#include "meshwm/spatial_grid.hpp"

namespace meshwm {

int SamplingParams::total_for(const Mesh& mesh) const {
    const long long by_face =
        static_cast<long long>(samples_per_face) * static_cast<long long>(mesh.face_count());
    const long long floor_total = mesh.face_count() >= 5000 ? min_total_large : min_total;
    return static_cast<int>(std::max(by_face, floor_total));
}

std::vector<Vec3> sample_surface(const Mesh& mesh, int total, std::uint64_t seed) {
    const int nf = mesh.face_count();
    if (nf == 0 || total <= 0) return {};

    std::vector<double> areas(static_cast<std::size_t>(nf), 0.0);
    double area_sum = 0.0;
    for (int f = 0; f < nf; ++f) {
        const auto& face = mesh.faces[static_cast<std::size_t>(f)];
        const Vec3& a = mesh.vertices[static_cast<std::size_t>(face[0])];
        const Vec3& b = mesh.vertices[static_cast<std::size_t>(face[1])];
        const Vec3& c = mesh.vertices[static_cast<std::size_t>(face[2])];
        areas[static_cast<std::size_t>(f)] = (b - a).cross(c - a).norm() * 0.5;
        area_sum += areas[static_cast<std::size_t>(f)];
    }

    // Largest-remainder allocation proportional to area, then at least one
    // sample per face.
    std::vector<int> counts(static_cast<std::size_t>(nf), 0);
    if (area_sum > 0.0) {
        std::vector<std::pair<double, int>> remainders;
        remainders.reserve(static_cast<std::size_t>(nf));
        long long assigned = 0;
        for (int f = 0; f < nf; ++f) {
            const double ideal =
                static_cast<double>(total) * areas[static_cast<std::size_t>(f)] / area_sum;
            const double fl = std::floor(ideal);
            counts[static_cast<std::size_t>(f)] = static_cast<int>(fl);
            assigned += static_cast<long long>(fl);
            remainders.push_back({ideal - fl, f});
        }
        std::sort(remainders.begin(), remainders.end(), [](const auto& x, const auto& y) {
            if (x.first != y.first) return x.first > y.first;
            return x.second < y.second;
        });
        for (long long k = 0; k < static_cast<long long>(total) - assigned &&
                              k < static_cast<long long>(remainders.size());
             ++k)
            ++counts[static_cast<std::size_t>(remainders[static_cast<std::size_t>(k)].second)];
    } else {
        for (auto& c : counts) c = total / nf;
    }
    for (auto& c : counts)
        if (c == 0) c = 1;

    SplitMix64 gen(seed);
    std::vector<Vec3> samples;
    for (int f = 0; f < nf; ++f) {
        const auto& face = mesh.faces[static_cast<std::size_t>(f)];
        const Vec3& a = mesh.vertices[static_cast<std::size_t>(face[0])];
        const Vec3& b = mesh.vertices[static_cast<std::size_t>(face[1])];
        const Vec3& c = mesh.vertices[static_cast<std::size_t>(face[2])];
        const int k = counts[static_cast<std::size_t>(f)];
        for (int i = 0; i < k; ++i) {
            // Stratify the first barycentric coordinate, jitter the rest.
            const double r1 = (static_cast<double>(i) + gen.next_double()) / k;
            const double r2 = gen.next_double();
            const double u = std::sqrt(r1);
            samples.push_back(a * (1.0 - u) + b * (u * (1.0 - r2)) + c * (u * r2));
        }
    }
    return samples;
}

double rms_distance(const Mesh& a, const Mesh& b, const SamplingParams& sampling) {
    const auto samples = sample_surface(a, sampling.total_for(a), sampling.seed);
    if (samples.empty()) return 0.0;
    const DistanceIndex index(b);
    double sum2 = 0.0;
    for (const auto& p : samples) {
        const double d = index.distance(p);
        sum2 += d * d;
    }
    return std::sqrt(sum2 / static_cast<double>(samples.size()));
}

double mrms(const Mesh& a, const Mesh& b, const SamplingParams& sampling) {
    return std::max(rms_distance(a, b, sampling), rms_distance(b, a, sampling));
}

namespace {

double one_sided_max(const Mesh& from, const Mesh& to, const SamplingParams& sampling) {
    auto samples = sample_surface(from, sampling.total_for(from), sampling.seed);
    samples.insert(samples.end(), from.vertices.begin(), from.vertices.end());
    const DistanceIndex index(to);
    double worst = 0.0;
    for (const auto& p : samples) worst = std::max(worst, index.distance(p));
    return worst;
}

}  // namespace

double hausdorff(const Mesh& a, const Mesh& b, const SamplingParams& sampling) {
    return std::max(one_sided_max(a, b, sampling), one_sided_max(b, a, sampling));
}

double msdm(const Mesh& a, const Mesh& b, const MsdmParams& params) {
    if (a.vertex_count() != b.vertex_count())
        throw CorrespondenceMismatch("msdm needs meshes with identical vertex counts");
    const std::size_t n = a.vertices.size();
    if (n == 0) return 0.0;

    const MeshGeometry ga = compute_geometry(a);
    const MeshGeometry gb = compute_geometry(b);
    const double radius = params.radius > 0.0 ? params.radius : 0.005 * ga.bbox_diag;
    const double s = radius * 0.5;  // Gaussian width inside the window

    // Curvature amplitude fields.
    const auto curv_a = taubin_mean_curvature(a, ga);
    const auto curv_b = taubin_mean_curvature(b, gb);
    std::vector<double> ca(n), cb(n);
    for (std::size_t i = 0; i < n; ++i) {
        ca[i] = std::fabs(curv_a.mean[i]);
        cb[i] = std::fabs(curv_b.mean[i]);
    }

    const SpatialGrid grid_a(a.vertices, radius);
    const SpatialGrid grid_b(b.vertices, radius);

    double pooled = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        // Window membership is the union of the two balls, and the weights
        // are symmetric in (A, B), so msdm(A, B) == msdm(B, A) exactly.
        auto wa = grid_a.query(a.vertices[i], radius);
        auto wb = grid_b.query(b.vertices[i], radius);
        std::vector<int> window;
        window.reserve(wa.size() + wb.size());
        window.insert(window.end(), wa.begin(), wa.end());
        window.insert(window.end(), wb.begin(), wb.end());
        std::sort(window.begin(), window.end());
        window.erase(std::unique(window.begin(), window.end()), window.end());

        double wsum = 0.0, mu_a = 0.0, mu_b = 0.0;
        std::vector<double> weights(window.size());
        for (std::size_t k = 0; k < window.size(); ++k) {
            const auto x = static_cast<std::size_t>(window[k]);
            const double da2 = distance2(a.vertices[x], a.vertices[i]);
            const double db2 = distance2(b.vertices[x], b.vertices[i]);
            const double w = std::exp(-(da2 + db2) / (4.0 * s * s));
            weights[k] = w;
            wsum += w;
            mu_a += w * ca[x];
            mu_b += w * cb[x];
        }
        mu_a /= wsum;
        mu_b /= wsum;

        double var_a = 0.0, var_b = 0.0, cov = 0.0;
        for (std::size_t k = 0; k < window.size(); ++k) {
            const auto x = static_cast<std::size_t>(window[k]);
            const double da = ca[x] - mu_a;
            const double db = cb[x] - mu_b;
            var_a += weights[k] * da * da;
            var_b += weights[k] * db * db;
            cov += weights[k] * da * db;
        }
        const double sd_a = std::sqrt(var_a / wsum);
        const double sd_b = std::sqrt(var_b / wsum);
        cov /= wsum;

        const double mu_max = std::max(mu_a, mu_b);
        const double sd_max = std::max(sd_a, sd_b);
        const double curv_term = mu_max > 0.0 ? std::fabs(mu_a - mu_b) / mu_max : 0.0;
        const double cont_term = sd_max > 0.0 ? std::fabs(sd_a - sd_b) / sd_max : 0.0;
        const double sd_prod = sd_a * sd_b;
        const double surf_term = sd_prod > 0.0 ? std::fabs(sd_prod - cov) / sd_prod : 0.0;

        double local = std::cbrt(0.4 * curv_term * curv_term * curv_term +
                                 0.4 * cont_term * cont_term * cont_term +
                                 0.2 * surf_term * surf_term * surf_term);
        local = std::clamp(local, 0.0, 1.0);
        pooled += local * local * local;
    }
    const double global = std::cbrt(pooled / static_cast<double>(n));
    return std::min(global, std::nextafter(1.0, 0.0));
}

CorrelationResult correlation(const std::vector<int>& w, const std::vector<int>& w_prime) {
    if (w.size() != w_prime.size())
        throw LengthMismatch("correlation needs sequences of equal length");
    if (w.size() < 2) throw LengthMismatch("correlation needs at least 2 bits");

    const auto m = static_cast<double>(w.size());
    double mean_w = 0.0, mean_p = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        mean_w += w[i];
        mean_p += w_prime[i];
    }
    mean_w /= m;
    mean_p /= m;

    double num = 0.0, den_w = 0.0, den_p = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double dw = w[i] - mean_w;
        const double dp = w_prime[i] - mean_p;
        num += dp * dw;
        den_w += dw * dw;
        den_p += dp * dp;
    }
    if (den_w == 0.0 || den_p == 0.0) return {0.0, true};
    return {num / std::sqrt(den_w * den_p), false};
}

std::string MetricReport::csv_header() {
    return "mesh_id,attack,params,mrms,hausdorff,msdm,correlation,sample_count";
}

std::string MetricReport::csv_row(const std::string& mesh_id, const std::string& attack,
                                  const std::string& params) const {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%.9g,%.9g,%.9g,%.9g,%d", mrms, hausdorff, msdm, correlation,
                  sample_count);
    std::ostringstream out;
    out << mesh_id << "," << attack << "," << params << "," << buf;
    return out.str();
}

}  // namespace meshwm
