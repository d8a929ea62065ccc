#include "enrich/raycast.hpp"

#include <bit>

namespace enrich {

namespace {

struct Candidate {
  std::int32_t triangle = -1;
  double depth = kNoDepth;
  RayHit hit;
};

}  // namespace

Framebuffer raycast_reference(const SceneGeometry& scene_geo, const PinholeCamera& camera, const RgbImage* background) {
  SceneGeometry geo = scene_geo;
  if (geo.shadows.enabled) {
    std::vector<TriangleVerts> occluders;
    for (const SceneTriangle& t : geo.triangles) occluders.push_back({t.p[0], t.p[1], t.p[2]});
    geo.occluders = Bvh::flat(std::move(occluders));
  }
  const int w = camera.width, h = camera.height;
  Framebuffer fb(w, h);
  if (background) fb.rgb = *background;
  const Vec3 origin = Vec3::Zero();
  constexpr double kSub[4][2] = {{0.25, 0.25}, {0.75, 0.25}, {0.25, 0.75}, {0.75, 0.75}};

  auto in_range = [&](double d) { return d > camera.near_plane && d < geo.bg_distance; };

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      int covered = 0;
      for (const auto& s : kSub) {
        const Ray ray{origin, camera.ray_direction(x + s[0], y + s[1])};
        for (const SceneTriangle& tri : geo.triangles) {
          if (intersect_triangle(ray, {tri.p[0], tri.p[1], tri.p[2]}) && in_range(plane_depth(tri, ray.direction))) {
            ++covered;
            break;
          }
        }
      }

      const Ray ray{origin, camera.ray_direction(x + 0.5, y + 0.5)};
      Candidate best;
      for (std::size_t i = 0; i < geo.triangles.size(); ++i) {
        const SceneTriangle& tri = geo.triangles[i];
        const auto hit = intersect_triangle(ray, {tri.p[0], tri.p[1], tri.p[2]});
        if (!hit) continue;
        const double d = plane_depth(tri, ray.direction);
        if (!in_range(d)) continue;
        bool take = best.triangle < 0 || d < best.depth;
        if (!take && d == best.depth) {
          const SceneTriangle& cur = geo.triangles[static_cast<std::size_t>(best.triangle)];
          take = tri.object < cur.object || (tri.object == cur.object && tri.local_index < cur.local_index);
        }
        if (take) best = {static_cast<std::int32_t>(i), d, *hit};
      }
      if (best.triangle < 0) continue;

      const SceneTriangle& tri = geo.triangles[static_cast<std::size_t>(best.triangle)];
      fb.mask.at(x, y) = 1;
      fb.depth.at(x, y) = best.depth;
      fb.object_id.at(x, y) = tri.object;
      SurfaceHit sh;
      sh.triangle = static_cast<std::uint32_t>(best.triangle);
      sh.depth = best.depth;
      sh.bary = {1.0 - best.hit.b1 - best.hit.b2, best.hit.b1, best.hit.b2};
      const Color shaded = shade_surface(geo, sh, ray.direction, pixel_key(geo.seed, x, y));
      Color bg = Color::Zero();
      if (background) bg = Color(background->at(x, y, 0), background->at(x, y, 1), background->at(x, y, 2)) / 255.0;
      const Color c = blend_with_background(shaded, covered, bg);
      for (int k = 0; k < 3; ++k) fb.rgb.at(x, y, k) = to_u8(c[k]);
    }
  }
  return fb;
}

Framebuffer raycast_reference(const RenderJob& job, const AssetCatalog& catalog) {
  job.validate();
  const SceneGeometry geo = build_scene_geometry(job.scene, catalog);
  return raycast_reference(geo, job.camera, job.background ? &job.background->rgb : nullptr);
}

}  // namespace enrich
