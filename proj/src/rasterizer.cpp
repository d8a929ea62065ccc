#include "enrich/rasterizer.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "enrich/errors.hpp"
#include "enrich/parallel.hpp"
#include "enrich/random.hpp"

namespace enrich {

namespace {

constexpr int kTileSize = 32;
constexpr double kSubOffsets[4][2] = {{0.25, 0.25}, {0.75, 0.25}, {0.25, 0.75}, {0.75, 0.75}};

double cross2(const Vec2& u, const Vec2& v) { return u.x() * v.y() - u.y() * v.x(); }

bool lex_less(const Vec2& a, const Vec2& b) { return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y()); }

/// Edge function evaluated from a canonical endpoint order so the value for
/// (a, b) is the exact negation of the value for (b, a).
double edge(const Vec2& a, const Vec2& b, const Vec2& p) {
  if (lex_less(a, b)) return cross2(b - a, p - a);
  return -cross2(a - b, p - b);
}

bool owns_edge(const Vec2& a, const Vec2& b) {
  const Vec2 d = b - a;
  return d.y() > 0.0 || (d.y() == 0.0 && d.x() < 0.0);
}

/// Screen-space triangle after clipping, tied to its source triangle.
struct ScreenTri {
  std::array<Vec2, 3> v;
  std::array<bool, 3> owns;  // top-left ownership for edges (0,1), (1,2), (2,0)
  double minx, miny, maxx, maxy;
  std::uint32_t source;
};

bool inside(const ScreenTri& t, const Vec2& p) {
  for (int e = 0; e < 3; ++e) {
    const double w = edge(t.v[e], t.v[(e + 1) % 3], p);
    if (w < 0.0 || (w == 0.0 && !t.owns[e])) return false;
  }
  return true;
}

void setup_triangle(const SceneTriangle& tri, std::uint32_t source, const PinholeCamera& cam,
                    std::vector<ScreenTri>& out) {
  // Sutherland-Hodgman against z >= near.
  const double near = cam.near_plane;
  std::array<Vec3, 4> poly;
  int count = 0;
  for (int i = 0; i < 3; ++i) {
    const Vec3& a = tri.p[i];
    const Vec3& b = tri.p[(i + 1) % 3];
    const bool ina = a.z() >= near, inb = b.z() >= near;
    if (ina) poly[count++] = a;
    if (ina != inb) {
      // Interpolate from the inside endpoint so both neighbors of an edge agree.
      const Vec3& p = ina ? a : b;
      const Vec3& q = ina ? b : a;
      const double t = (near - p.z()) / (q.z() - p.z());
      Vec3 x = p + t * (q - p);
      x.z() = near;
      poly[count++] = x;
    }
  }
  if (count < 3) return;
  std::array<Vec2, 4> s;
  for (int i = 0; i < count; ++i)
    s[i] = Vec2(cam.fx * poly[i].x() / poly[i].z() + cam.cx, cam.fy * poly[i].y() / poly[i].z() + cam.cy);
  for (int k = 1; k + 1 < count; ++k) {
    ScreenTri st;
    st.v = {s[0], s[k], s[k + 1]};
    const double area = cross2(st.v[1] - st.v[0], st.v[2] - st.v[0]);
    if (area == 0.0 || !std::isfinite(area)) continue;
    if (area < 0.0) std::swap(st.v[1], st.v[2]);
    for (int e = 0; e < 3; ++e) st.owns[e] = owns_edge(st.v[e], st.v[(e + 1) % 3]);
    st.minx = std::min({st.v[0].x(), st.v[1].x(), st.v[2].x()});
    st.maxx = std::max({st.v[0].x(), st.v[1].x(), st.v[2].x()});
    st.miny = std::min({st.v[0].y(), st.v[1].y(), st.v[2].y()});
    st.maxy = std::max({st.v[0].y(), st.v[1].y(), st.v[2].y()});
    st.source = source;
    out.push_back(st);
  }
}

bool closer(const SceneTriangle& a, double da, const SceneTriangle& b, double db) {
  if (da != db) return da < db;
  if (a.object != b.object) return a.object < b.object;
  return a.local_index < b.local_index;
}

void raster_screen_tris(std::span<const ScreenTri> screen, std::span<const SceneTriangle> tris,
                        std::uint32_t index_offset, const PinholeCamera& cam, double bg, GeometryBuffers& buf,
                        const PixelRect& r) {
  for (const ScreenTri& st : screen) {
    const int x0 = std::max(r.x0, static_cast<int>(std::floor(st.minx)) - 1);
    const int x1 = std::min(r.x1 - 1, static_cast<int>(std::ceil(st.maxx)));
    const int y0 = std::max(r.y0, static_cast<int>(std::floor(st.miny)) - 1);
    const int y1 = std::min(r.y1 - 1, static_cast<int>(std::ceil(st.maxy)));
    if (x0 > x1 || y0 > y1) continue;
    const SceneTriangle& tri = tris[st.source];
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        for (int s = 0; s < 4; ++s) {
          const double sx = x + kSubOffsets[s][0], sy = y + kSubOffsets[s][1];
          if (!inside(st, Vec2(sx, sy))) continue;
          const double d = plane_depth(tri, cam.ray_direction(sx, sy));
          if (d > cam.near_plane && d < bg) buf.subsamples.at(x, y) |= static_cast<std::uint8_t>(1u << s);
        }
        const double px = x + 0.5, py = y + 0.5;
        if (!inside(st, Vec2(px, py))) continue;
        const double d = plane_depth(tri, cam.ray_direction(px, py));
        if (!(d > cam.near_plane && d < bg)) continue;
        std::int32_t& cur = buf.triangle.at(x, y);
        const std::uint32_t global = index_offset + st.source;
        if (cur < 0 || closer(tri, d, tris[static_cast<std::uint32_t>(cur) - index_offset], buf.depth.at(x, y))) {
          cur = static_cast<std::int32_t>(global);
          buf.depth.at(x, y) = d;
        }
      }
    }
  }
}

}  // namespace

void RenderJob::validate() const {
  camera.validate();
  if (background && (background->width() != camera.width || background->height() != camera.height))
    throw ConfigError("background resolution does not match the camera");
}

std::uint64_t pixel_key(std::uint64_t scene_seed, int x, int y) {
  return mix64(scene_seed ^ (static_cast<std::uint64_t>(y) << 32 | static_cast<std::uint32_t>(x)));
}

std::uint8_t to_u8(double v) {
  return static_cast<std::uint8_t>(std::floor(std::clamp(v, 0.0, 1.0) * 255.0 + 0.5));
}

Color blend_with_background(const Color& shaded, int covered_subsamples, const Color& background) {
  if (covered_subsamples >= 4) return shaded;
  const double w = (1.0 + covered_subsamples) / 5.0;
  return w * shaded + (1.0 - w) * background;
}

void rasterize_triangles(std::span<const SceneTriangle> tris, std::uint32_t index_offset, const PinholeCamera& camera,
                         double bg_distance, GeometryBuffers& buffers, const PixelRect& region) {
  std::vector<ScreenTri> screen;
  for (std::uint32_t i = 0; i < tris.size(); ++i) setup_triangle(tris[i], i, camera, screen);
  raster_screen_tris(screen, tris, index_offset, camera, bg_distance, buffers, region);
}

GeometryBuffers render_geometry(const SceneGeometry& geo, const PinholeCamera& camera, int threads) {
  GeometryBuffers buf(camera.width, camera.height);
  std::vector<ScreenTri> screen;
  screen.reserve(geo.triangles.size());
  for (std::uint32_t i = 0; i < geo.triangles.size(); ++i) setup_triangle(geo.triangles[i], i, camera, screen);

  const int tiles_x = (camera.width + kTileSize - 1) / kTileSize;
  const int tiles_y = (camera.height + kTileSize - 1) / kTileSize;
  // Bin by tile so each tile only walks overlapping triangles.
  std::vector<std::vector<ScreenTri>> bins(static_cast<std::size_t>(tiles_x) * tiles_y);
  for (const ScreenTri& st : screen) {
    const int tx0 = std::clamp(static_cast<int>(std::floor(st.minx)) - 1, 0, camera.width - 1) / kTileSize;
    const int tx1 = std::clamp(static_cast<int>(std::ceil(st.maxx)), 0, camera.width - 1) / kTileSize;
    const int ty0 = std::clamp(static_cast<int>(std::floor(st.miny)) - 1, 0, camera.height - 1) / kTileSize;
    const int ty1 = std::clamp(static_cast<int>(std::ceil(st.maxy)), 0, camera.height - 1) / kTileSize;
    if (st.maxx < -1.0 || st.minx > camera.width + 1.0 || st.maxy < -1.0 || st.miny > camera.height + 1.0) continue;
    for (int ty = ty0; ty <= ty1; ++ty)
      for (int tx = tx0; tx <= tx1; ++tx) bins[static_cast<std::size_t>(ty) * tiles_x + tx].push_back(st);
  }
  parallel_for(bins.size(), threads, [&](std::size_t t) {
    const int tx = static_cast<int>(t) % tiles_x, ty = static_cast<int>(t) / tiles_x;
    const PixelRect r{tx * kTileSize, ty * kTileSize, std::min(camera.width, (tx + 1) * kTileSize),
                      std::min(camera.height, (ty + 1) * kTileSize)};
    raster_screen_tris(bins[t], geo.triangles, 0, camera, geo.bg_distance, buf, r);
  });
  return buf;
}

Framebuffer shade_layer(const SceneGeometry& geo, const GeometryBuffers& buf, const PinholeCamera& camera,
                        const RgbImage* background, int threads, const Image<std::uint8_t>* only) {
  const int w = camera.width, h = camera.height;
  Framebuffer fb(w, h);
  if (background) fb.rgb = *background;
  parallel_for(static_cast<std::size_t>(h), threads, [&](std::size_t row) {
    const int y = static_cast<int>(row);
    for (int x = 0; x < w; ++x) {
      const std::int32_t ti = buf.triangle.at(x, y);
      if (ti < 0) continue;
      fb.mask.at(x, y) = 1;
      fb.depth.at(x, y) = buf.depth.at(x, y);
      const SceneTriangle& tri = geo.triangles[static_cast<std::size_t>(ti)];
      fb.object_id.at(x, y) = tri.object;
      if (only && !only->at(x, y)) continue;

      const Vec3 dir = camera.ray_direction(x + 0.5, y + 0.5);
      // Perspective-correct barycentrics from homogeneous edge functions.
      const double la = dir.dot(tri.p[1].cross(tri.p[2]));
      const double lb = dir.dot(tri.p[2].cross(tri.p[0]));
      const double lc = dir.dot(tri.p[0].cross(tri.p[1]));
      const double sum = la + lb + lc;
      SurfaceHit hit;
      hit.triangle = static_cast<std::uint32_t>(ti);
      hit.depth = buf.depth.at(x, y);
      hit.bary = {la / sum, lb / sum, lc / sum};
      const Color shaded = shade_surface(geo, hit, dir, pixel_key(geo.seed, x, y));
      Color bg = Color::Zero();
      if (background)
        bg = Color(background->at(x, y, 0), background->at(x, y, 1), background->at(x, y, 2)) / 255.0;
      const Color c = blend_with_background(shaded, std::popcount(buf.subsamples.at(x, y)), bg);
      for (int k = 0; k < 3; ++k) fb.rgb.at(x, y, k) = to_u8(c[k]);
    }
  });
  return fb;
}

Framebuffer render_virtual_layer(const RenderJob& job, const AssetCatalog& catalog, int threads) {
  job.validate();
  const SceneGeometry geo = build_scene_geometry(job.scene, catalog);
  const GeometryBuffers buf = render_geometry(geo, job.camera, threads);
  return shade_layer(geo, buf, job.camera, job.background ? &job.background->rgb : nullptr, threads);
}

std::size_t Framebuffer::mask_count() const {
  std::size_t n = 0;
  for (std::uint8_t m : mask.data()) n += m ? 1 : 0;
  return n;
}

}  // namespace enrich
