#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "enrich/mesh.hpp"

namespace enrich {

enum class PrimitiveKind {
  Box,
  Cylinder,
  LatheProfile,
  Prism,
  TorusSegment,
  TableLike,
  CabinetLike,
  VaseProfile,
};

inline constexpr PrimitiveKind kAllPrimitiveKinds[] = {
    PrimitiveKind::Box,          PrimitiveKind::Cylinder,  PrimitiveKind::LatheProfile,
    PrimitiveKind::Prism,        PrimitiveKind::TorusSegment, PrimitiveKind::TableLike,
    PrimitiveKind::CabinetLike,  PrimitiveKind::VaseProfile,
};

std::string_view to_string(PrimitiveKind kind);
std::optional<PrimitiveKind> primitive_kind_from_string(std::string_view name);

/// Smallest accepted tessellation level for a kind.
int min_detail(PrimitiveKind kind);

/// Builds a parametric mesh centered at the origin whose nominal bounding box
/// has extents `dims` (scene units). `detail` is the angular segment count for
/// round kinds and is ignored by box-assembled kinds. Throws ConfigError on
/// nonpositive dims or too low detail.
Mesh make_primitive(PrimitiveKind kind, int detail, const Vec3& dims);

}  // namespace enrich
