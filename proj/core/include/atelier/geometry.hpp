#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "atelier/image.hpp"

namespace atelier {

/// Point in the normalized image frame: x to the right, y downward, both in [0,1].
struct NormPoint {
  double x = 0.0;
  double y = 0.0;

  friend constexpr bool operator==(const NormPoint&, const NormPoint&) = default;
};

struct BoundingBox {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  double width() const noexcept { return x_max - x_min; }
  double height() const noexcept { return y_max - y_min; }
  double area() const noexcept { return width() * height(); }
  bool degenerate() const noexcept { return !(area() > 0.0); }
  bool contains(NormPoint p) const noexcept {
    return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max;
  }
  /// Orders the corners and clamps them into the unit square.
  BoundingBox normalized() const noexcept;

  friend constexpr bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

/// Boundary pixels of one mask component in tracing order (implicitly closed).
struct DenseContour {
  std::vector<NormPoint> points;
};

/// Closed polygon; the last vertex connects back to the first.
struct PolygonContour {
  int id = 0;
  std::vector<NormPoint> vertices;
  std::string label;
};

struct SampledPoint {
  NormPoint point;
  int polygon_id = 0;
};

enum class GridKind { RuleOfThirds, CentralCross, CentralCircle };

std::string_view to_string(GridKind kind) noexcept;
std::optional<GridKind> parse_grid_kind(std::string_view name) noexcept;

struct OverlaySegment {
  NormPoint a;
  NormPoint b;
};

struct OverlayCircle {
  NormPoint center;
  double radius = 0.0;
};

struct GridOverlay {
  GridKind kind = GridKind::RuleOfThirds;
  std::vector<OverlaySegment> lines;
  std::optional<OverlayCircle> circle;
};

inline constexpr double kDefaultRdpEpsilon = 0.01;

/// Pixel center (index + 0.5) / extent, the same frame rasterize_box samples.
double normalize_pixel(int index, int extent) noexcept;

double distance(NormPoint a, NormPoint b) noexcept;
double point_segment_distance(NormPoint p, NormPoint a, NormPoint b) noexcept;

/// Outer boundary of every 8-connected foreground component, in raster order
/// of each component's first pixel. Holes are ignored.
/// Throws Error(EmptyMask) when the mask has no foreground.
std::vector<DenseContour> extract_outer_contours(const Mask& mask);

/// Closed-contour Ramer-Douglas-Peucker. Throws Error(DegenerateResult) when
/// fewer than three vertices survive.
PolygonContour simplify_rdp(const DenseContour& contour, double epsilon, int id = 0,
                            std::string label = {});

/// Per-edge quota max(1, round(len / shortest_len)), placed at k/n along the
/// edge for k = 0..n-1 so every vertex is emitted once.
std::vector<SampledPoint> sample_polygon_points(const PolygonContour& polygon);

double iou(const BoundingBox& a, const BoundingBox& b) noexcept;
/// True when IoU is undefined because the union has zero area; iou() then returns 0.
bool iou_zero_area(const BoundingBox& a, const BoundingBox& b) noexcept;

GridOverlay generate_grid(GridKind kind);

/// Tight box over every point. Throws Error(EmptyInput) when there are no points.
BoundingBox bbox_of_contours(std::span<const DenseContour> contours);

/// Pixels whose centers ((x+0.5)/W, (y+0.5)/H) lie inside the closed box.
Mask rasterize_box(const BoundingBox& box, int width, int height);

/// Even-odd fill of a normalized polygon sampled at pixel centers.
/// Throws Error(DegeneratePolygon) for fewer than three points.
Mask rasterize_polygon(std::span<const NormPoint> polygon, int width, int height);

}  // namespace atelier
