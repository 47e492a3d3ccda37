#include "atelier/svg.hpp"

#include <sstream>

namespace atelier {

std::string render_overlay_svg(int width, int height, std::span<const PolygonContour> polygons,
                               std::span<const CompositionLine> lines,
                               const std::optional<GridOverlay>& grid, const OverlayStyle& style) {
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  auto px = [&](NormPoint p) {
    std::ostringstream s;
    s << p.x * width << ',' << p.y * height;
    return s.str();
  };

  if (grid) {
    out << "  <g class=\"grid\" stroke=\"" << style.grid_stroke << "\" stroke-width=\""
        << style.stroke_width << "\" fill=\"none\">\n";
    for (const auto& l : grid->lines) {
      out << "    <line x1=\"" << l.a.x * width << "\" y1=\"" << l.a.y * height << "\" x2=\""
          << l.b.x * width << "\" y2=\"" << l.b.y * height << "\"/>\n";
    }
    if (grid->circle) {
      // Radius is relative to the unit square, so the circle becomes an ellipse
      // on non-square frames.
      out << "    <ellipse cx=\"" << grid->circle->center.x * width << "\" cy=\""
          << grid->circle->center.y * height << "\" rx=\"" << grid->circle->radius * width
          << "\" ry=\"" << grid->circle->radius * height << "\"/>\n";
    }
    out << "  </g>\n";
  }

  out << "  <g class=\"polygons\" stroke=\"" << style.polygon_stroke << "\" stroke-width=\""
      << style.stroke_width << "\" fill=\"none\">\n";
  for (const auto& poly : polygons) {
    out << "    <polygon data-id=\"" << poly.id << "\" points=\"";
    for (std::size_t i = 0; i < poly.vertices.size(); ++i) {
      if (i) out << ' ';
      out << px(poly.vertices[i]);
    }
    out << "\"/>\n";
  }
  out << "  </g>\n";

  out << "  <g class=\"lines\" stroke=\"" << style.line_stroke << "\" stroke-width=\""
      << style.stroke_width << "\">\n";
  for (const auto& line : lines) {
    if (!line.segment) continue;
    out << "    <line data-rank=\"" << line.rank << "\" x1=\"" << line.segment->a.x * width
        << "\" y1=\"" << line.segment->a.y * height << "\" x2=\"" << line.segment->b.x * width
        << "\" y2=\"" << line.segment->b.y * height << "\"/>\n";
  }
  out << "  </g>\n</svg>\n";
  return out.str();
}

}  // namespace atelier
