#include "meshwm/mesh_io.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "meshwm/errors.hpp"

namespace meshwm {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Strips comments and splits into whitespace tokens. OFF files allow '#'
// comments anywhere.
std::vector<std::string> tokenize_off(const std::string& text) {
    std::vector<std::string> tokens;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string tok;
        while (ls >> tok) tokens.push_back(tok);
    }
    return tokens;
}

long parse_long(const std::string& tok, const std::string& where) {
    std::size_t pos = 0;
    long v = 0;
    try {
        v = std::stol(tok, &pos);
    } catch (const std::exception&) {
        throw ParseError(where + ": expected integer, got '" + tok + "'");
    }
    if (pos != tok.size()) throw ParseError(where + ": expected integer, got '" + tok + "'");
    return v;
}

double parse_double(const std::string& tok, const std::string& where) {
    std::size_t pos = 0;
    double v = 0;
    try {
        v = std::stod(tok, &pos);
    } catch (const std::exception&) {
        throw ParseError(where + ": expected number, got '" + tok + "'");
    }
    if (pos != tok.size()) throw ParseError(where + ": expected number, got '" + tok + "'");
    return v;
}

void push_fan(Mesh& mesh, const std::vector<int>& poly, const std::string& where) {
    if (poly.size() < 3) throw ParseError(where + ": face with fewer than 3 vertices");
    for (std::size_t k = 1; k + 1 < poly.size(); ++k)
        mesh.faces.push_back({poly[0], poly[k], poly[k + 1]});
}

void format_vertex(char* buf, std::size_t cap, const char* prefix, const Vec3& v) {
    std::snprintf(buf, cap, "%s%.12g %.12g %.12g\n", prefix, v.x, v.y, v.z);
}

}  // namespace

MeshFormat format_from_path(const std::string& path) {
    const auto dot = path.rfind('.');
    if (dot != std::string::npos) {
        std::string ext = path.substr(dot + 1);
        for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        if (ext == "obj") return MeshFormat::Obj;
    }
    return MeshFormat::Off;
}

Mesh parse_off(const std::string& text, const std::string& name) {
    const auto tokens = tokenize_off(text);
    std::size_t i = 0;
    auto next = [&](const std::string& what) -> const std::string& {
        if (i >= tokens.size()) throw ParseError(name + ": unexpected end of file, wanted " + what);
        return tokens[i++];
    };

    if (next("OFF header") != "OFF") throw ParseError(name + ": missing OFF header");
    const long nv = parse_long(next("vertex count"), name);
    const long nf = parse_long(next("face count"), name);
    parse_long(next("edge count"), name);  // ignored, often zero
    if (nv < 0 || nf < 0) throw ParseError(name + ": negative element count");

    Mesh mesh;
    mesh.vertices.reserve(static_cast<std::size_t>(nv));
    for (long v = 0; v < nv; ++v) {
        const double x = parse_double(next("vertex coordinate"), name);
        const double y = parse_double(next("vertex coordinate"), name);
        const double z = parse_double(next("vertex coordinate"), name);
        mesh.vertices.push_back({x, y, z});
    }
    for (long f = 0; f < nf; ++f) {
        const long k = parse_long(next("face size"), name);
        if (k < 3) throw ParseError(name + ": face with fewer than 3 vertices");
        std::vector<int> poly;
        poly.reserve(static_cast<std::size_t>(k));
        for (long j = 0; j < k; ++j)
            poly.push_back(static_cast<int>(parse_long(next("face index"), name)));
        push_fan(mesh, poly, name);
    }
    mesh.validate();
    return mesh;
}

Mesh parse_obj(const std::string& text, const std::string& name) {
    Mesh mesh;
    std::istringstream lines(text);
    std::string line;
    long line_no = 0;
    while (std::getline(lines, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag)) continue;
        const std::string where = name + ":" + std::to_string(line_no);
        if (tag == "v") {
            std::string xs, ys, zs;
            if (!(ls >> xs >> ys >> zs)) throw ParseError(where + ": vertex needs 3 coordinates");
            mesh.vertices.push_back({parse_double(xs, where), parse_double(ys, where),
                                     parse_double(zs, where)});
        } else if (tag == "f") {
            std::vector<int> poly;
            std::string ref;
            while (ls >> ref) {
                // "i", "i/t", "i//n", "i/t/n" forms; only the vertex index matters.
                const auto slash = ref.find('/');
                if (slash != std::string::npos) ref.erase(slash);
                long idx = parse_long(ref, where);
                if (idx < 0) idx += static_cast<long>(mesh.vertices.size()) + 1;
                if (idx <= 0) throw IndexOutOfRange(where + ": face index out of range");
                poly.push_back(static_cast<int>(idx - 1));
            }
            push_fan(mesh, poly, where);
        }
        // Everything else (vn, vt, g, o, s, usemtl, mtllib) is ignored.
    }
    mesh.validate();
    return mesh;
}

Mesh load_mesh(const std::string& path, MeshFormat format) {
    const std::string text = read_file(path);
    return format == MeshFormat::Off ? parse_off(text, path) : parse_obj(text, path);
}

Mesh load_mesh(const std::string& path) { return load_mesh(path, format_from_path(path)); }

void save_mesh(const Mesh& mesh, const std::string& path, MeshFormat format) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    char buf[128];
    if (format == MeshFormat::Off) {
        out << "OFF\n" << mesh.vertex_count() << " " << mesh.face_count() << " 0\n";
        for (const auto& v : mesh.vertices) {
            format_vertex(buf, sizeof buf, "", v);
            out << buf;
        }
        for (const auto& f : mesh.faces) out << "3 " << f[0] << " " << f[1] << " " << f[2] << "\n";
    } else {
        for (const auto& v : mesh.vertices) {
            format_vertex(buf, sizeof buf, "v ", v);
            out << buf;
        }
        for (const auto& f : mesh.faces)
            out << "f " << f[0] + 1 << " " << f[1] + 1 << " " << f[2] + 1 << "\n";
    }
    if (!out.flush()) throw IoError("write failed for " + path);
}

void save_mesh(const Mesh& mesh, const std::string& path) {
    save_mesh(mesh, path, format_from_path(path));
}

}  // namespace meshwm
