#pragma once

#include <cstdint>
#include <span>

#include "enrich/framebuffer.hpp"
#include "enrich/rgbd.hpp"
#include "enrich/scene_geometry.hpp"

namespace enrich {

/// Visibility pass output. `triangle` indexes SceneGeometry::triangles.
/// `subsamples` holds one bit per 2x2 sub-pixel sample at offsets
/// (0.25|0.75, 0.25|0.75): set when any virtual surface lies in front of the
/// background plane there, regardless of which object is nearest.
struct GeometryBuffers {
  DepthImage depth;
  Image<std::int32_t> triangle;
  Image<std::uint8_t> subsamples;

  GeometryBuffers() = default;
  GeometryBuffers(int width, int height)
      : depth(width, height, 1, kNoDepth), triangle(width, height, 1, -1), subsamples(width, height, 1, 0) {}
};

struct PixelRect {
  int x0 = 0, y0 = 0, x1 = 0, y1 = 0;  // half-open
};

/// Scene plus how to see it. `background` supplies the real image placed on
/// the background plane; it must match the camera resolution.
struct RenderJob {
  SceneSpec scene;
  PinholeCamera camera;
  const RgbdPair* background = nullptr;

  void validate() const;
};

/// Scan-converts triangles (after near-plane clipping) into `buffers` within
/// `region`. Top-left fill rule on pixel centers; a fragment replaces the
/// stored one when its (depth, object, local index) tuple is smaller, so the
/// result does not depend on submission order. Only depths in
/// (near_plane, bg_distance) are kept. `tris` indices are offset by
/// `index_offset` when stored.
void rasterize_triangles(std::span<const SceneTriangle> tris, std::uint32_t index_offset, const PinholeCamera& camera,
                         double bg_distance, GeometryBuffers& buffers, const PixelRect& region);

/// Tile-parallel visibility pass over every scene triangle.
GeometryBuffers render_geometry(const SceneGeometry& geo, const PinholeCamera& camera, int threads = 1);

/// Shading pass. Silhouette pixels blend the shaded color with the
/// background pixel by (1 + covered subsamples) / 5; fully covered pixels use
/// the shaded color alone. Where `only` is given and zero, the pixel keeps its
/// mask and depth but its color is left as background.
Framebuffer shade_layer(const SceneGeometry& geo, const GeometryBuffers& buffers, const PinholeCamera& camera,
                        const RgbImage* background, int threads = 1, const Image<std::uint8_t>* only = nullptr);

Framebuffer render_virtual_layer(const RenderJob& job, const AssetCatalog& catalog, int threads = 1);

/// Shadow-jitter key for a pixel; shared with the ray-cast reference.
std::uint64_t pixel_key(std::uint64_t scene_seed, int x, int y);

/// Maps a linear color in [0,1] to 8 bits, rounding half up.
std::uint8_t to_u8(double v);

/// Silhouette blend shared by both renderers.
Color blend_with_background(const Color& shaded, int covered_subsamples, const Color& background);

}  // namespace enrich
