#include "meshwm/attacks.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "meshwm/errors.hpp"
#include "meshwm/geometry.hpp"
#include "meshwm/prng.hpp"

namespace meshwm {

Mesh add_noise(const Mesh& mesh, double amplitude, std::uint64_t seed) {
    if (amplitude < 0.0) throw Error("noise amplitude must be >= 0");
    Mesh out = mesh;
    if (amplitude == 0.0 || mesh.vertex_count() == 0) return out;
    const MeshGeometry g = compute_geometry(mesh);
    double mean_norm = 0.0;
    for (const double r : g.radial_norms) mean_norm += r;
    mean_norm /= static_cast<double>(g.radial_norms.size());
    const double a = amplitude * mean_norm;

    SplitMix64 gen(seed);
    for (auto& v : out.vertices) {
        v.x += (gen.next_u64() & 1ULL) ? a : -a;
        v.y += (gen.next_u64() & 1ULL) ? a : -a;
        v.z += (gen.next_u64() & 1ULL) ? a : -a;
    }
    return out;
}

Mesh smooth_laplacian(const Mesh& mesh, int iterations, double factor) {
    if (iterations < 0) throw Error("iterations must be >= 0");
    if (iterations > 0 && !(factor > 0.0 && factor < 1.0))
        throw Error("smoothing factor must be in (0, 1)");
    Mesh out = mesh;
    const auto neighbors = vertex_neighbors(mesh);
    std::vector<Vec3> next(out.vertices.size());
    for (int it = 0; it < iterations; ++it) {
        for (std::size_t v = 0; v < out.vertices.size(); ++v) {
            const auto& ring = neighbors[v];
            if (ring.empty()) {
                next[v] = out.vertices[v];
                continue;
            }
            Vec3 avg;
            for (const int j : ring) avg += out.vertices[static_cast<std::size_t>(j)];
            avg = avg / static_cast<double>(ring.size());
            next[v] = out.vertices[v] + (avg - out.vertices[v]) * factor;
        }
        out.vertices.swap(next);
    }
    return out;
}

Mesh quantize_coords(const Mesh& mesh, int bits) {
    if (bits < 1 || bits > 24) throw Error("quantization bits must be in [1, 24]");
    Mesh out = mesh;
    if (mesh.vertex_count() == 0) return out;
    Vec3 lo = mesh.vertices[0], hi = mesh.vertices[0];
    for (const auto& v : mesh.vertices) {
        lo = {std::min(lo.x, v.x), std::min(lo.y, v.y), std::min(lo.z, v.z)};
        hi = {std::max(hi.x, v.x), std::max(hi.y, v.y), std::max(hi.z, v.z)};
    }
    const double levels = std::pow(2.0, bits) - 1.0;
    auto snap = [&](double c, double mn, double mx) {
        const double range = mx - mn;
        if (range <= 0.0) return c;  // degenerate axis passes through
        const double q = std::round((c - mn) / range * levels);
        return mn + q / levels * range;
    };
    for (auto& v : out.vertices) {
        v.x = snap(v.x, lo.x, hi.x);
        v.y = snap(v.y, lo.y, hi.y);
        v.z = snap(v.z, lo.z, hi.z);
    }
    return out;
}

Mesh similarity_transform(const Mesh& mesh, const Mat3& rotation, double scale,
                          const Vec3& translation) {
    if (!(scale > 0.0)) throw Error("scale must be positive");
    if (rotation.orthonormality_defect() >= 1e-9)
        throw InvalidRotation("rotation matrix is not orthonormal");
    Mesh out = mesh;
    for (auto& v : out.vertices) v = rotation * v * scale + translation;
    return out;
}

Mesh random_similarity(const Mesh& mesh, std::uint64_t seed) {
    SplitMix64 gen(seed);
    const Mat3 rot = gen.next_rotation();
    const double scale = std::exp2(gen.next_in(-1.0, 1.0));  // log-uniform in [0.5, 2]
    const MeshGeometry g = compute_geometry(mesh);
    const double t = 0.5 * g.bbox_diag;
    const Vec3 translation{gen.next_in(-t, t), gen.next_in(-t, t), gen.next_in(-t, t)};
    return similarity_transform(mesh, rot, scale, translation);
}

Mesh reorder_elements(const Mesh& mesh, std::uint64_t seed) {
    SplitMix64 gen(seed);
    const int n = mesh.vertex_count();
    // new_of[old] = new index
    const std::vector<int> new_of = gen.next_permutation_of(n);

    Mesh out;
    out.vertices.resize(static_cast<std::size_t>(n));
    for (int old = 0; old < n; ++old)
        out.vertices[static_cast<std::size_t>(new_of[static_cast<std::size_t>(old)])] =
            mesh.vertices[static_cast<std::size_t>(old)];

    out.faces.reserve(mesh.faces.size());
    for (const auto& f : mesh.faces)
        out.faces.push_back({new_of[static_cast<std::size_t>(f[0])],
                             new_of[static_cast<std::size_t>(f[1])],
                             new_of[static_cast<std::size_t>(f[2])]});

    const std::vector<int> face_perm = gen.next_permutation_of(mesh.face_count());
    std::vector<std::array<int, 3>> shuffled(out.faces.size());
    for (std::size_t i = 0; i < out.faces.size(); ++i)
        shuffled[static_cast<std::size_t>(face_perm[i])] = out.faces[i];
    // Rotating the triple keeps the winding, so orientation survives.
    for (auto& f : shuffled) {
        const auto r = static_cast<int>(gen.next_below(3));
        std::rotate(f.begin(), f.begin() + r, f.end());
    }
    out.faces.swap(shuffled);
    return out;
}

namespace {

struct EdgeKey {
    int a, b;
    bool operator<(const EdgeKey& o) const {
        if (a != o.a) return a < o.a;
        return b < o.b;
    }
};

EdgeKey edge_of(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

// Midpoint and Loop share the 1-to-4 connectivity; only vertex placement
// differs.
Mesh subdivide_quarter(const Mesh& mesh, bool loop_weights) {
    const int n = mesh.vertex_count();

    std::map<EdgeKey, std::vector<int>> edge_faces;
    for (int f = 0; f < mesh.face_count(); ++f) {
        const auto& face = mesh.faces[static_cast<std::size_t>(f)];
        for (int k = 0; k < 3; ++k) {
            const auto key =
                edge_of(face[static_cast<std::size_t>(k)], face[static_cast<std::size_t>((k + 1) % 3)]);
            auto& list = edge_faces[key];
            list.push_back(f);
            if (list.size() > 2) throw NonManifoldEdge("edge with more than two incident faces");
        }
    }

    Mesh out;
    out.vertices = mesh.vertices;

    if (loop_weights) {
        // Re-weight the original vertices first (using original positions).
        const auto neighbors = vertex_neighbors(mesh);
        std::vector<char> on_boundary(static_cast<std::size_t>(n), 0);
        std::map<int, std::vector<int>> boundary_nbrs;
        for (const auto& [key, faces] : edge_faces)
            if (faces.size() == 1) {
                on_boundary[static_cast<std::size_t>(key.a)] = 1;
                on_boundary[static_cast<std::size_t>(key.b)] = 1;
                boundary_nbrs[key.a].push_back(key.b);
                boundary_nbrs[key.b].push_back(key.a);
            }
        for (int v = 0; v < n; ++v) {
            const auto& ring = neighbors[static_cast<std::size_t>(v)];
            if (ring.empty()) continue;
            if (on_boundary[static_cast<std::size_t>(v)]) {
                const auto& bn = boundary_nbrs[v];
                if (bn.size() == 2)
                    out.vertices[static_cast<std::size_t>(v)] =
                        mesh.vertices[static_cast<std::size_t>(v)] * 0.75 +
                        (mesh.vertices[static_cast<std::size_t>(bn[0])] +
                         mesh.vertices[static_cast<std::size_t>(bn[1])]) *
                            0.125;
                continue;
            }
            const auto k = static_cast<double>(ring.size());
            const double inner = 0.375 + 0.25 * std::cos(2.0 * M_PI / k);
            const double beta = (0.625 - inner * inner) / k;
            Vec3 sum;
            for (const int j : ring) sum += mesh.vertices[static_cast<std::size_t>(j)];
            out.vertices[static_cast<std::size_t>(v)] =
                mesh.vertices[static_cast<std::size_t>(v)] * (1.0 - k * beta) + sum * beta;
        }
    }

    // Edge vertices.
    std::map<EdgeKey, int> edge_vertex;
    for (const auto& [key, faces] : edge_faces) {
        const Vec3& a = mesh.vertices[static_cast<std::size_t>(key.a)];
        const Vec3& b = mesh.vertices[static_cast<std::size_t>(key.b)];
        Vec3 p;
        if (!loop_weights || faces.size() == 1) {
            p = (a + b) * 0.5;
        } else {
            // Interior Loop stencil 3/8 3/8 1/8 1/8 with the two wing
            // vertices opposite the edge.
            Vec3 wings;
            for (const int f : faces)
                for (const int v : mesh.faces[static_cast<std::size_t>(f)])
                    if (v != key.a && v != key.b) wings += mesh.vertices[static_cast<std::size_t>(v)];
            p = (a + b) * 0.375 + wings * 0.125;
        }
        edge_vertex[key] = out.vertex_count();
        out.vertices.push_back(p);
    }

    for (const auto& face : mesh.faces) {
        const int a = face[0], b = face[1], c = face[2];
        const int ab = edge_vertex[edge_of(a, b)];
        const int bc = edge_vertex[edge_of(b, c)];
        const int ca = edge_vertex[edge_of(c, a)];
        out.faces.push_back({a, ab, ca});
        out.faces.push_back({b, bc, ab});
        out.faces.push_back({c, ca, bc});
        out.faces.push_back({ab, bc, ca});
    }
    return out;
}

Mesh subdivide_sqrt3(const Mesh& mesh) {
    const int n = mesh.vertex_count();

    std::map<EdgeKey, std::vector<int>> edge_faces;
    for (int f = 0; f < mesh.face_count(); ++f) {
        const auto& face = mesh.faces[static_cast<std::size_t>(f)];
        for (int k = 0; k < 3; ++k) {
            const auto key =
                edge_of(face[static_cast<std::size_t>(k)], face[static_cast<std::size_t>((k + 1) % 3)]);
            auto& list = edge_faces[key];
            list.push_back(f);
            if (list.size() > 2) throw NonManifoldEdge("edge with more than two incident faces");
        }
    }

    Mesh out;
    // Relax original vertices (Kobbelt's alpha(n)).
    out.vertices = mesh.vertices;
    const auto neighbors = vertex_neighbors(mesh);
    for (int v = 0; v < n; ++v) {
        const auto& ring = neighbors[static_cast<std::size_t>(v)];
        if (ring.empty()) continue;
        const auto k = static_cast<double>(ring.size());
        const double alpha = (4.0 - 2.0 * std::cos(2.0 * M_PI / k)) / 9.0;
        Vec3 sum;
        for (const int j : ring) sum += mesh.vertices[static_cast<std::size_t>(j)];
        out.vertices[static_cast<std::size_t>(v)] =
            mesh.vertices[static_cast<std::size_t>(v)] * (1.0 - alpha) + sum * (alpha / k);
    }

    // Face centroids (of the original positions).
    std::vector<int> centroid_of(mesh.faces.size());
    for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
        const auto& face = mesh.faces[f];
        const Vec3 cen = (mesh.vertices[static_cast<std::size_t>(face[0])] +
                          mesh.vertices[static_cast<std::size_t>(face[1])] +
                          mesh.vertices[static_cast<std::size_t>(face[2])]) /
                         3.0;
        centroid_of[f] = out.vertex_count();
        out.vertices.push_back(cen);
    }

    // Interior edges flip to connect the two adjacent centroids; boundary
    // edges keep their corner triangle.
    for (const auto& [key, faces] : edge_faces) {
        if (faces.size() == 2) {
            // Orient via the face in which the edge runs a -> b.
            int fwd = -1, bwd = -1;
            for (const int f : faces) {
                const auto& face = mesh.faces[static_cast<std::size_t>(f)];
                for (int k = 0; k < 3; ++k) {
                    const int p = face[static_cast<std::size_t>(k)];
                    const int q = face[static_cast<std::size_t>((k + 1) % 3)];
                    if (p == key.a && q == key.b) fwd = f;
                    if (p == key.b && q == key.a) bwd = f;
                }
            }
            if (fwd < 0 || bwd < 0) {
                // Inconsistent winding; keep unflipped corner triangles.
                const int c0 = centroid_of[static_cast<std::size_t>(faces[0])];
                const int c1 = centroid_of[static_cast<std::size_t>(faces[1])];
                out.faces.push_back({key.a, key.b, c0});
                out.faces.push_back({key.b, key.a, c1});
                continue;
            }
            const int cf = centroid_of[static_cast<std::size_t>(fwd)];
            const int cb = centroid_of[static_cast<std::size_t>(bwd)];
            // Winding: walking a -> b in the forward face leaves cf on the
            // left, so the flipped pair is (a, cb, cf) and (b, cf, cb).
            out.faces.push_back({key.a, cb, cf});
            out.faces.push_back({key.b, cf, cb});
        } else {
            const int c0 = centroid_of[static_cast<std::size_t>(faces[0])];
            const auto& face = mesh.faces[static_cast<std::size_t>(faces[0])];
            // Preserve the winding the edge has inside its face.
            bool forward = false;
            for (int k = 0; k < 3; ++k)
                if (face[static_cast<std::size_t>(k)] == key.a &&
                    face[static_cast<std::size_t>((k + 1) % 3)] == key.b)
                    forward = true;
            if (forward)
                out.faces.push_back({key.a, key.b, c0});
            else
                out.faces.push_back({key.b, key.a, c0});
        }
    }
    return out;
}

}  // namespace

Mesh subdivide(const Mesh& mesh, SubdivisionScheme scheme, int iterations) {
    if (iterations < 1) throw Error("subdivision iterations must be >= 1");
    Mesh out = mesh;
    for (int i = 0; i < iterations; ++i) {
        switch (scheme) {
            case SubdivisionScheme::Midpoint:
                out = subdivide_quarter(out, false);
                break;
            case SubdivisionScheme::Loop:
                out = subdivide_quarter(out, true);
                break;
            case SubdivisionScheme::Sqrt3:
                out = subdivide_sqrt3(out);
                break;
        }
    }
    return out;
}

Mesh crop(const Mesh& mesh, double fraction, std::uint64_t seed) {
    if (!(fraction > 0.0 && fraction < 1.0)) throw Error("crop fraction must be in (0, 1)");
    const int n = mesh.vertex_count();
    const auto remove_count = static_cast<int>(std::llround(fraction * n));
    if (n - remove_count < 4) throw EmptyResult("crop would leave fewer than 4 vertices");

    const MeshGeometry g = compute_geometry(mesh);
    SplitMix64 gen(seed);
    const Vec3 normal = gen.next_unit_vector();

    std::vector<int> order(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const double da = (mesh.vertices[static_cast<std::size_t>(a)] - g.center).dot(normal);
        const double db = (mesh.vertices[static_cast<std::size_t>(b)] - g.center).dot(normal);
        if (da != db) return da > db;
        return a < b;
    });

    std::vector<char> removed(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < remove_count; ++i) removed[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = 1;

    Mesh out;
    std::vector<int> remap(static_cast<std::size_t>(n), -1);
    for (int v = 0; v < n; ++v)
        if (!removed[static_cast<std::size_t>(v)]) {
            remap[static_cast<std::size_t>(v)] = out.vertex_count();
            out.vertices.push_back(mesh.vertices[static_cast<std::size_t>(v)]);
        }
    for (const auto& f : mesh.faces) {
        if (removed[static_cast<std::size_t>(f[0])] || removed[static_cast<std::size_t>(f[1])] ||
            removed[static_cast<std::size_t>(f[2])])
            continue;
        out.faces.push_back({remap[static_cast<std::size_t>(f[0])],
                             remap[static_cast<std::size_t>(f[1])],
                             remap[static_cast<std::size_t>(f[2])]});
    }
    return out;
}

// --- attack spec grammar ------------------------------------------------------

namespace {

std::vector<std::string> split_colon(const std::string& text) {
    std::vector<std::string> parts;
    std::string cur;
    for (const char c : text) {
        if (c == ':') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    return parts;
}

[[noreturn]] void bad_spec(const std::string& text, const std::string& why) {
    throw Error("bad attack spec '" + text + "': " + why +
                " (valid: noise:A, smooth:IT:F, quant:BITS, similarity:SEED, reorder:SEED, "
                "subdiv:{midpoint|loop|sqrt3}:IT, crop:FRACTION:SEED)");
}

double spec_num(const std::vector<std::string>& parts, std::size_t i, const std::string& text) {
    if (i >= parts.size()) bad_spec(text, "missing parameter");
    try {
        std::size_t pos = 0;
        const double v = std::stod(parts[i], &pos);
        if (pos != parts[i].size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        bad_spec(text, "bad number '" + parts[i] + "'");
    }
}

}  // namespace

AttackSpec AttackSpec::parse(const std::string& text) {
    const auto parts = split_colon(text);
    AttackSpec spec;
    spec.text = text;
    spec.kind = parts[0];
    if (spec.kind == "noise") {
        spec.amplitude = spec_num(parts, 1, text);
        if (parts.size() > 2) spec.seed = static_cast<std::uint64_t>(spec_num(parts, 2, text));
    } else if (spec.kind == "smooth") {
        spec.iterations = static_cast<int>(spec_num(parts, 1, text));
        spec.factor = spec_num(parts, 2, text);
    } else if (spec.kind == "quant") {
        spec.bits = static_cast<int>(spec_num(parts, 1, text));
    } else if (spec.kind == "similarity" || spec.kind == "reorder") {
        spec.seed = static_cast<std::uint64_t>(spec_num(parts, 1, text));
    } else if (spec.kind == "subdiv") {
        if (parts.size() < 3) bad_spec(text, "subdiv needs a scheme and iterations");
        if (parts[1] == "midpoint")
            spec.scheme = SubdivisionScheme::Midpoint;
        else if (parts[1] == "loop")
            spec.scheme = SubdivisionScheme::Loop;
        else if (parts[1] == "sqrt3")
            spec.scheme = SubdivisionScheme::Sqrt3;
        else
            bad_spec(text, "unknown scheme '" + parts[1] + "'");
        spec.iterations = static_cast<int>(spec_num(parts, 2, text));
    } else if (spec.kind == "crop") {
        spec.fraction = spec_num(parts, 1, text);
        if (parts.size() > 2) spec.seed = static_cast<std::uint64_t>(spec_num(parts, 2, text));
    } else {
        bad_spec(text, "unknown kind '" + spec.kind + "'");
    }
    return spec;
}

Mesh AttackSpec::apply(const Mesh& mesh, std::uint64_t seed_override) const {
    const std::uint64_t s = seed_override ? seed_override : seed;
    if (kind == "noise") return add_noise(mesh, amplitude, s);
    if (kind == "smooth") return smooth_laplacian(mesh, iterations, factor);
    if (kind == "quant") return quantize_coords(mesh, bits);
    if (kind == "similarity") return random_similarity(mesh, s);
    if (kind == "reorder") return reorder_elements(mesh, s);
    if (kind == "subdiv") return subdivide(mesh, scheme, iterations);
    if (kind == "crop") return crop(mesh, fraction, s);
    throw Error("unknown attack kind '" + kind + "'");
}

bool AttackSpec::randomized() const {
    return kind == "noise" || kind == "similarity" || kind == "reorder" || kind == "crop";
}

}  // namespace meshwm
