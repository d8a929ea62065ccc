#include "enrich/primitives.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "enrich/errors.hpp"

namespace enrich {

namespace {

constexpr double kPi = std::numbers::pi;

template <typename V>
std::uint32_t push(std::vector<V>& v, const V& x) {
  v.push_back(x);
  return static_cast<std::uint32_t>(v.size() - 1);
}

void add_tri(Mesh& m, Corner a, Corner b, Corner c, std::uint32_t group) {
  m.triangles.push_back(Triangle{{a, b, c}, group});
}

/// Axis-aligned box with 8 shared corner positions and one flat normal per face.
/// `face_groups` is indexed by 2*axis + (positive ? 0 : 1).
void add_box(Mesh& m, const Vec3& lo, const Vec3& hi, const std::array<std::uint32_t, 6>& face_groups) {
  const auto base = static_cast<std::uint32_t>(m.positions.size());
  for (int i = 0; i < 8; ++i) {
    m.positions.emplace_back((i & 1) ? hi.x() : lo.x(), (i & 2) ? hi.y() : lo.y(),
                             (i & 4) ? hi.z() : lo.z());
  }
  const auto uv0 = static_cast<std::uint32_t>(m.uvs.size());
  m.uvs.emplace_back(0.0, 0.0);
  m.uvs.emplace_back(1.0, 0.0);
  m.uvs.emplace_back(1.0, 1.0);
  m.uvs.emplace_back(0.0, 1.0);

  for (int axis = 0; axis < 3; ++axis) {
    const int u = (axis + 1) % 3;
    const int v = (axis + 2) % 3;
    for (int positive = 1; positive >= 0; --positive) {
      Vec3 n = Vec3::Zero();
      n[axis] = positive ? 1.0 : -1.0;
      const std::uint32_t ni = push(m.normals, n);
      auto corner = [&](int bu, int bv, std::uint32_t uv) {
        const int idx = (positive << axis) | (bu << u) | (bv << v);
        return Corner{base + static_cast<std::uint32_t>(idx), ni, uv0 + uv};
      };
      // Counter-clockwise in (u, v) gives +axis orientation; flipped for the negative face.
      std::array<Corner, 4> q = {corner(0, 0, 0), corner(1, 0, 1), corner(1, 1, 2), corner(0, 1, 3)};
      if (!positive) std::swap(q[1], q[3]);
      const std::uint32_t g = face_groups[2 * axis + (positive ? 0 : 1)];
      add_tri(m, q[0], q[1], q[2], g);
      add_tri(m, q[0], q[2], q[3], g);
    }
  }
}

void add_box(Mesh& m, const Vec3& lo, const Vec3& hi, std::uint32_t group) {
  add_box(m, lo, hi, {group, group, group, group, group, group});
}

/// Surface of revolution around +y with `segments` angular steps. Profile
/// points run bottom to top as (radius, y). Both ends are closed with fans,
/// so the result is watertight.
void add_lathe(Mesh& m, const std::vector<Vec2>& profile, int segments, std::uint32_t side_group,
               std::uint32_t top_group, std::uint32_t bottom_group, bool smooth) {
  const int rings = static_cast<int>(profile.size());
  const auto base = static_cast<std::uint32_t>(m.positions.size());
  for (int j = 0; j < rings; ++j) {
    for (int i = 0; i < segments; ++i) {
      const double t = 2.0 * kPi * i / segments;
      m.positions.emplace_back(profile[j].x() * std::cos(t), profile[j].y(),
                               profile[j].x() * std::sin(t));
    }
  }
  auto pos = [&](int j, int i) { return base + static_cast<std::uint32_t>(j * segments + (i % segments)); };

  // Side uvs carry a seam column so u runs over [0, 1].
  const auto uv_base = static_cast<std::uint32_t>(m.uvs.size());
  for (int j = 0; j < rings; ++j)
    for (int i = 0; i <= segments; ++i)
      m.uvs.emplace_back(static_cast<double>(i) / segments, static_cast<double>(j) / (rings - 1));
  auto side_uv = [&](int j, int i) { return uv_base + static_cast<std::uint32_t>(j * (segments + 1) + i); };

  // 2D profile normals (outward), central differences.
  std::vector<Vec2> pn(rings);
  for (int j = 0; j < rings; ++j) {
    const Vec2 d = profile[std::min(j + 1, rings - 1)] - profile[std::max(j - 1, 0)];
    pn[j] = Vec2(d.y(), -d.x()).normalized();
  }

  const auto n_base = static_cast<std::uint32_t>(m.normals.size());
  if (smooth) {
    for (int j = 0; j < rings; ++j)
      for (int i = 0; i < segments; ++i) {
        const double t = 2.0 * kPi * i / segments;
        m.normals.push_back(Vec3(pn[j].x() * std::cos(t), pn[j].y(), pn[j].x() * std::sin(t)).normalized());
      }
  }
  for (int j = 0; j + 1 < rings; ++j) {
    for (int i = 0; i < segments; ++i) {
      std::uint32_t nb0, nb1, nt0, nt1;
      if (smooth) {
        nb0 = n_base + j * segments + i;
        nb1 = n_base + j * segments + (i + 1) % segments;
        nt0 = n_base + (j + 1) * segments + i;
        nt1 = n_base + (j + 1) * segments + (i + 1) % segments;
      } else {
        const Vec3 a = m.positions[pos(j, i)], b = m.positions[pos(j, i + 1)],
                   c = m.positions[pos(j + 1, i)];
        const std::uint32_t f = push(m.normals, (c - a).cross(b - a).normalized());
        nb0 = nb1 = nt0 = nt1 = f;
      }
      const Corner b0{pos(j, i), nb0, side_uv(j, i)};
      const Corner b1{pos(j, i + 1), nb1, side_uv(j, i + 1)};
      const Corner t0{pos(j + 1, i), nt0, side_uv(j + 1, i)};
      const Corner t1{pos(j + 1, i + 1), nt1, side_uv(j + 1, i + 1)};
      add_tri(m, b0, t0, b1, side_group);
      add_tri(m, b1, t0, t1, side_group);
    }
  }

  // Caps: planar disc uvs shared by both ends.
  const auto cap_uv = static_cast<std::uint32_t>(m.uvs.size());
  for (int i = 0; i < segments; ++i) {
    const double t = 2.0 * kPi * i / segments;
    m.uvs.emplace_back(0.5 + 0.5 * std::cos(t), 0.5 + 0.5 * std::sin(t));
  }
  const std::uint32_t up = push(m.normals, Vec3(0, 1, 0));
  const std::uint32_t down = push(m.normals, Vec3(0, -1, 0));
  const int top = rings - 1;
  for (int k = 1; k + 1 < segments; ++k) {
    add_tri(m, {pos(top, 0), up, cap_uv}, {pos(top, k + 1), up, cap_uv + k + 1},
            {pos(top, k), up, cap_uv + k}, top_group);
    add_tri(m, {pos(0, 0), down, cap_uv}, {pos(0, k), down, cap_uv + k},
            {pos(0, k + 1), down, cap_uv + k + 1}, bottom_group);
  }
}

std::vector<Vec2> sample_profile(int rings, const std::function<double(double)>& radius) {
  std::vector<Vec2> p;
  for (int j = 0; j < rings; ++j) {
    const double t = static_cast<double>(j) / (rings - 1);
    p.emplace_back(radius(t), t - 0.5);
  }
  return p;
}

Mesh unit_torus_segment(int detail) {
  Mesh m;
  const std::uint32_t body = m.add_group("body");
  const std::uint32_t ends = m.add_group("ends");
  const double major = 0.35, minor = 0.15, sweep = 1.5 * kPi;
  const int n = detail, k = std::max(3, detail / 2);
  for (int i = 0; i <= n; ++i) {
    const double th = sweep * i / n;
    for (int j = 0; j < k; ++j) {
      const double ph = 2.0 * kPi * j / k;
      const Vec3 radial(std::cos(th), 0.0, std::sin(th));
      m.positions.push_back(radial * (major + minor * std::cos(ph)) + Vec3(0, minor * std::sin(ph), 0));
      m.normals.push_back((radial * std::cos(ph) + Vec3(0, std::sin(ph), 0)).normalized());
    }
  }
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= k; ++j) m.uvs.emplace_back(static_cast<double>(i) / n, static_cast<double>(j) / k);
  auto idx = [&](int i, int j) { return static_cast<std::uint32_t>(i * k + (j % k)); };
  auto uv = [&](int i, int j) { return static_cast<std::uint32_t>(i * (k + 1) + j); };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < k; ++j) {
      const Corner a{idx(i, j), idx(i, j), uv(i, j)};
      const Corner b{idx(i + 1, j), idx(i + 1, j), uv(i + 1, j)};
      const Corner c{idx(i + 1, j + 1), idx(i + 1, j + 1), uv(i + 1, j + 1)};
      const Corner d{idx(i, j + 1), idx(i, j + 1), uv(i, j + 1)};
      add_tri(m, a, c, b, body);
      add_tri(m, a, d, c, body);
    }
  }
  // Flat caps on both open ends.
  const auto cap_uv = static_cast<std::uint32_t>(m.uvs.size());
  for (int j = 0; j < k; ++j) {
    const double ph = 2.0 * kPi * j / k;
    m.uvs.emplace_back(0.5 + 0.5 * std::cos(ph), 0.5 + 0.5 * std::sin(ph));
  }
  const std::uint32_t start_n = push(m.normals, Vec3(0, 0, -1));
  const Vec3 end_dir(-std::sin(sweep), 0.0, std::cos(sweep));
  const std::uint32_t end_n = push(m.normals, end_dir);
  for (int j = 1; j + 1 < k; ++j) {
    std::array<Corner, 3> s = {Corner{idx(0, 0), start_n, cap_uv}, Corner{idx(0, j), start_n, cap_uv + j},
                               Corner{idx(0, j + 1), start_n, cap_uv + j + 1}};
    std::array<Corner, 3> e = {Corner{idx(n, 0), end_n, cap_uv}, Corner{idx(n, j + 1), end_n, cap_uv + j + 1},
                               Corner{idx(n, j), end_n, cap_uv + j}};
    // Orient each cap fan to agree with its declared normal.
    for (auto* f : {&s, &e}) {
      const Vec3& p0 = m.positions[(*f)[0].position];
      const Vec3& p1 = m.positions[(*f)[1].position];
      const Vec3& p2 = m.positions[(*f)[2].position];
      if ((p1 - p0).cross(p2 - p0).dot(m.normals[(*f)[0].normal]) < 0) std::swap((*f)[1], (*f)[2]);
      add_tri(m, (*f)[0], (*f)[1], (*f)[2], ends);
    }
  }
  return m;
}

Mesh unit_prism(int sides) {
  Mesh m;
  const std::uint32_t side = m.add_group("side");
  const std::uint32_t top = m.add_group("top");
  const std::uint32_t bottom = m.add_group("bottom");
  // A prism is a two-ring lathe with flat facets.
  add_lathe(m, {Vec2(0.5, -0.5), Vec2(0.5, 0.5)}, sides, side, top, bottom, false);
  return m;
}

}  // namespace

std::string_view to_string(PrimitiveKind kind) {
  switch (kind) {
    case PrimitiveKind::Box: return "box";
    case PrimitiveKind::Cylinder: return "cylinder";
    case PrimitiveKind::LatheProfile: return "lathe_profile";
    case PrimitiveKind::Prism: return "prism";
    case PrimitiveKind::TorusSegment: return "torus_segment";
    case PrimitiveKind::TableLike: return "table_like";
    case PrimitiveKind::CabinetLike: return "cabinet_like";
    case PrimitiveKind::VaseProfile: return "vase_profile";
  }
  return "unknown";
}

std::optional<PrimitiveKind> primitive_kind_from_string(std::string_view name) {
  for (PrimitiveKind k : kAllPrimitiveKinds)
    if (to_string(k) == name) return k;
  return std::nullopt;
}

int min_detail(PrimitiveKind kind) {
  switch (kind) {
    case PrimitiveKind::Box:
    case PrimitiveKind::TableLike:
    case PrimitiveKind::CabinetLike: return 1;
    default: return 3;
  }
}

Mesh make_primitive(PrimitiveKind kind, int detail, const Vec3& dims) {
  if (!((dims.array() > 0.0).all() && dims.allFinite()))
    throw ConfigError("primitive dims must be positive and finite");
  if (detail < min_detail(kind))
    throw ConfigError(std::string(to_string(kind)) + " needs detail >= " + std::to_string(min_detail(kind)));

  Mesh m;
  const Vec3 lo(-0.5, -0.5, -0.5), hi(0.5, 0.5, 0.5);
  switch (kind) {
    case PrimitiveKind::Box: {
      std::array<std::uint32_t, 6> g{};
      const char* names[6] = {"+x", "-x", "+y", "-y", "+z", "-z"};
      for (int i = 0; i < 6; ++i) g[i] = m.add_group(names[i]);
      add_box(m, lo, hi, g);
      break;
    }
    case PrimitiveKind::Cylinder: {
      const auto side = m.add_group("side"), top = m.add_group("top"), bottom = m.add_group("bottom");
      add_lathe(m, {Vec2(0.5, -0.5), Vec2(0.5, 0.5)}, detail, side, top, bottom, true);
      break;
    }
    case PrimitiveKind::LatheProfile: {
      const auto side = m.add_group("side"), top = m.add_group("top"), bottom = m.add_group("bottom");
      // Bowl-like lamp base: wide foot, narrow waist, flared rim.
      auto r = [](double t) { return 0.5 * (0.55 + 0.45 * std::cos(2.0 * kPi * t) * (0.6 + 0.4 * t)); };
      add_lathe(m, sample_profile(std::max(4, detail / 2), r), detail, side, top, bottom, true);
      break;
    }
    case PrimitiveKind::VaseProfile: {
      const auto side = m.add_group("body"), top = m.add_group("rim"), bottom = m.add_group("base");
      auto r = [](double t) {
        const double belly = std::sin(kPi * std::min(1.0, t / 0.75));
        return 0.5 * (0.25 + 0.75 * belly * belly * (t < 0.75 ? 1.0 : 0.0) + 0.3 * t * t);
      };
      std::vector<Vec2> profile = sample_profile(std::max(5, detail / 2 + 2), r);
      double widest = 0.0;
      for (const Vec2& q : profile) widest = std::max(widest, q.x());
      for (Vec2& q : profile) q.x() *= 0.5 / widest;
      add_lathe(m, profile, detail, side, top, bottom, true);
      break;
    }
    case PrimitiveKind::Prism:
      m = unit_prism(detail);
      break;
    case PrimitiveKind::TorusSegment:
      m = unit_torus_segment(detail);
      break;
    case PrimitiveKind::TableLike: {
      const auto top = m.add_group("top"), legs = m.add_group("legs");
      add_box(m, Vec3(-0.5, 0.42, -0.5), Vec3(0.5, 0.5, 0.5), top);
      const double w = 0.08;
      for (double sx : {-1.0, 1.0})
        for (double sz : {-1.0, 1.0}) {
          const Vec3 c(sx * (0.5 - w), 0.0, sz * (0.5 - w));
          add_box(m, Vec3(c.x() - w / 2, -0.5, c.z() - w / 2), Vec3(c.x() + w / 2, 0.42, c.z() + w / 2), legs);
        }
      break;
    }
    case PrimitiveKind::CabinetLike: {
      const auto body = m.add_group("body"), door = m.add_group("door"), handle = m.add_group("handle");
      add_box(m, Vec3(-0.5, -0.5, -0.5), Vec3(0.5, 0.5, 0.4), body);
      add_box(m, Vec3(-0.45, -0.45, 0.4), Vec3(0.45, 0.45, 0.46), door);
      add_box(m, Vec3(0.3, -0.1, 0.46), Vec3(0.36, 0.1, 0.5), handle);
      break;
    }
  }
  AffineTransform scale;
  scale.scale = dims;
  return apply_transform(m, scale);
}

}  // namespace enrich
