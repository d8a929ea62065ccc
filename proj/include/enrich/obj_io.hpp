#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "enrich/mesh.hpp"

namespace enrich {

/// Parses the Wavefront OBJ subset: v, vt, vn, f, g, o. Polygons are fan
/// triangulated, `g`/`o` start surface groups, missing normals become flat
/// face normals and missing uvs a planar projection. Throws ParseError with
/// the 1-based line number on malformed input.
Mesh parse_obj(std::istream& in);
Mesh load_mesh(const std::filesystem::path& path);

/// Writes positions, uvs, normals and faces with full round-trip precision.
void write_obj(std::ostream& out, const Mesh& mesh);
void save_mesh(const std::filesystem::path& path, const Mesh& mesh);

}  // namespace enrich
