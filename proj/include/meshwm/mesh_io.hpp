#pragma once

#include <string>

#include "meshwm/mesh.hpp"

namespace meshwm {

enum class MeshFormat { Off, Obj };

/// Picks OFF/OBJ from the file extension; defaults to OFF.
MeshFormat format_from_path(const std::string& path);

/// Loads an ASCII OFF or OBJ file. Non-triangle faces are fan-triangulated.
/// Throws ParseError / IndexOutOfRange / IoError.
Mesh load_mesh(const std::string& path, MeshFormat format);
Mesh load_mesh(const std::string& path);  // format from extension

/// Writes an ASCII OFF ("OFF", counts, vertices, "3 i j k" faces) or OBJ
/// ("v x y z", 1-based "f i j k"). Coordinates carry 12 significant digits.
void save_mesh(const Mesh& mesh, const std::string& path, MeshFormat format);
void save_mesh(const Mesh& mesh, const std::string& path);

/// Parses mesh text already in memory (used by tests and fixtures).
Mesh parse_off(const std::string& text, const std::string& name = "<memory>");
Mesh parse_obj(const std::string& text, const std::string& name = "<memory>");

}  // namespace meshwm
