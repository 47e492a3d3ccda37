#pragma once

#include <optional>
#include <span>
#include <string>

#include "atelier/composition.hpp"
#include "atelier/geometry.hpp"

namespace atelier {

struct OverlayStyle {
  std::string polygon_stroke = "#2f80ed";
  std::string line_stroke = "#eb5757";
  std::string grid_stroke = "#9b9b9b";
  double stroke_width = 2.0;
};

/// Standalone SVG of polygons, composition line segments and an optional grid,
/// scaled to a width x height pixel frame.
std::string render_overlay_svg(int width, int height, std::span<const PolygonContour> polygons,
                               std::span<const CompositionLine> lines,
                               const std::optional<GridOverlay>& grid = std::nullopt,
                               const OverlayStyle& style = {});

}  // namespace atelier
