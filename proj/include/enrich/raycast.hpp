#pragma once

#include "enrich/framebuffer.hpp"
#include "enrich/rasterizer.hpp"

namespace enrich {

/// Brute-force reference renderer: every pixel ray (and sub-pixel ray) is
/// intersected with every triangle. Visibility and barycentrics come from
/// ray/triangle intersection instead of scan conversion; depth and shading
/// reuse the shared plane_depth and shade_surface. Shadows are traced
/// against an unaccelerated occluder list. Intended for small images.
Framebuffer raycast_reference(const SceneGeometry& geo, const PinholeCamera& camera, const RgbImage* background);

Framebuffer raycast_reference(const RenderJob& job, const AssetCatalog& catalog);

}  // namespace enrich
