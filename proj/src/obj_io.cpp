#include "enrich/obj_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <string_view>
#include <vector>

#include "enrich/errors.hpp"

namespace enrich {

namespace {

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

double parse_double(std::string_view tok, int line) {
  // from_chars for double is available in libstdc++ 11.
  double v = 0.0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size())
    throw ParseError("invalid number '" + std::string(tok) + "'", line);
  return v;
}

long parse_index(std::string_view tok, std::size_t count, int line) {
  long v = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size() || v == 0)
    throw ParseError("invalid index '" + std::string(tok) + "'", line);
  const long resolved = v > 0 ? v - 1 : static_cast<long>(count) + v;
  if (resolved < 0 || static_cast<std::size_t>(resolved) >= count)
    throw ParseError("index " + std::string(tok) + " out of range", line);
  return resolved;
}

struct RawCorner {
  long v = -1, vt = -1, vn = -1;
};

}  // namespace

Mesh parse_obj(std::istream& in) {
  Mesh mesh;
  std::vector<std::array<RawCorner, 3>> faces;
  std::vector<std::uint32_t> face_groups;
  std::uint32_t current_group = 0;
  bool group_set = false;

  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    std::string_view body(line.data(), hash == std::string::npos ? line.size() : hash);
    const auto tok = split_ws(body);
    if (tok.empty()) continue;
    const std::string_view kw = tok[0];
    if (kw == "v") {
      if (tok.size() < 4) throw ParseError("vertex needs 3 coordinates", lineno);
      mesh.positions.emplace_back(parse_double(tok[1], lineno), parse_double(tok[2], lineno),
                                  parse_double(tok[3], lineno));
    } else if (kw == "vt") {
      if (tok.size() < 3) throw ParseError("texture coordinate needs 2 values", lineno);
      mesh.uvs.emplace_back(parse_double(tok[1], lineno), parse_double(tok[2], lineno));
    } else if (kw == "vn") {
      if (tok.size() < 4) throw ParseError("normal needs 3 values", lineno);
      const Vec3 n(parse_double(tok[1], lineno), parse_double(tok[2], lineno), parse_double(tok[3], lineno));
      if (n.norm() == 0.0) throw ParseError("zero-length normal", lineno);
      // Already-unit normals are kept verbatim so exported meshes reload bit-identically.
      mesh.normals.push_back(std::abs(n.norm() - 1.0) < 1e-12 ? n : n.normalized());
    } else if (kw == "g" || kw == "o") {
      current_group = mesh.add_group(tok.size() > 1 ? std::string(tok[1]) : "default");
      group_set = true;
    } else if (kw == "f") {
      if (tok.size() < 4) throw ParseError("face needs at least 3 vertices", lineno);
      if (!group_set) {
        current_group = mesh.add_group("default");
        group_set = true;
      }
      std::vector<RawCorner> poly;
      for (std::size_t i = 1; i < tok.size(); ++i) {
        RawCorner c;
        std::string_view t = tok[i];
        const auto s1 = t.find('/');
        c.v = parse_index(t.substr(0, s1), mesh.positions.size(), lineno);
        if (s1 != std::string_view::npos) {
          const auto rest = t.substr(s1 + 1);
          const auto s2 = rest.find('/');
          const auto vt = rest.substr(0, s2);
          if (!vt.empty()) c.vt = parse_index(vt, mesh.uvs.size(), lineno);
          if (s2 != std::string_view::npos) {
            const auto vn = rest.substr(s2 + 1);
            if (!vn.empty()) c.vn = parse_index(vn, mesh.normals.size(), lineno);
          }
        }
        poly.push_back(c);
      }
      for (std::size_t i = 1; i + 1 < poly.size(); ++i) {
        faces.push_back({poly[0], poly[i], poly[i + 1]});
        face_groups.push_back(current_group);
      }
    }
    // Other statements (usemtl, mtllib, s, l, p) are ignored.
  }
  if (faces.empty()) throw ParseError("OBJ contains no faces", lineno);

  // Planar uv fallback over the xy bounding box.
  Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
  Vec3 hi = -lo;
  for (const Vec3& p : mesh.positions) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const Vec3 ext = (hi - lo).cwiseMax(Vec3::Constant(1e-12));

  for (std::size_t f = 0; f < faces.size(); ++f) {
    Triangle tri;
    tri.group = face_groups[f];
    const auto& raw = faces[f];
    std::uint32_t flat = 0;
    bool have_flat = false;
    for (int k = 0; k < 3; ++k) {
      Corner& c = tri.corners[k];
      c.position = static_cast<std::uint32_t>(raw[k].v);
      if (raw[k].vn >= 0) {
        c.normal = static_cast<std::uint32_t>(raw[k].vn);
      } else {
        if (!have_flat) {
          const Vec3& a = mesh.positions[raw[0].v];
          const Vec3& b = mesh.positions[raw[1].v];
          const Vec3& d = mesh.positions[raw[2].v];
          Vec3 n = (b - a).cross(d - a);
          n = n.norm() > 0.0 ? n.normalized() : Vec3(0, 0, 1);
          mesh.normals.push_back(n);
          flat = static_cast<std::uint32_t>(mesh.normals.size() - 1);
          have_flat = true;
        }
        c.normal = flat;
      }
      if (raw[k].vt >= 0) {
        c.uv = static_cast<std::uint32_t>(raw[k].vt);
      } else {
        const Vec3& p = mesh.positions[raw[k].v];
        mesh.uvs.emplace_back((p.x() - lo.x()) / ext.x(), (p.y() - lo.y()) / ext.y());
        c.uv = static_cast<std::uint32_t>(mesh.uvs.size() - 1);
      }
    }
    mesh.triangles.push_back(tri);
  }
  return mesh;
}

Mesh load_mesh(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open mesh " + path.string());
  try {
    return parse_obj(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_obj(std::ostream& out, const Mesh& mesh) {
  char buf[128];
  for (const Vec3& p : mesh.positions) {
    std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", p.x(), p.y(), p.z());
    out << buf;
  }
  for (const Vec2& t : mesh.uvs) {
    std::snprintf(buf, sizeof buf, "vt %.17g %.17g\n", t.x(), t.y());
    out << buf;
  }
  for (const Vec3& n : mesh.normals) {
    std::snprintf(buf, sizeof buf, "vn %.17g %.17g %.17g\n", n.x(), n.y(), n.z());
    out << buf;
  }
  // Group statements follow triangle order, so groups may repeat.
  std::uint32_t current = std::numeric_limits<std::uint32_t>::max();
  for (const Triangle& t : mesh.triangles) {
    if (t.group != current) {
      out << "g " << mesh.group_names[t.group] << '\n';
      current = t.group;
    }
    out << 'f';
    for (const Corner& c : t.corners)
      out << ' ' << c.position + 1 << '/' << c.uv + 1 << '/' << c.normal + 1;
    out << '\n';
  }
}

void save_mesh(const std::filesystem::path& path, const Mesh& mesh) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write mesh " + path.string());
  write_obj(out, mesh);
}

}  // namespace enrich
