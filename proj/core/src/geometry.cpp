#include "atelier/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <utility>

#include "atelier/error.hpp"

namespace atelier {

namespace {

// Clockwise with y pointing down: E, SE, S, SW, W, NW, N, NE.
constexpr std::array<std::array<int, 2>, 8> kDirs{{
    {1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1},
}};

int direction_to(int fx, int fy, int tx, int ty) noexcept {
  const int dx = tx - fx;
  const int dy = ty - fy;
  for (int d = 0; d < 8; ++d) {
    if (kDirs[static_cast<std::size_t>(d)][0] == dx && kDirs[static_cast<std::size_t>(d)][1] == dy) {
      return d;
    }
  }
  return 0;
}

// Labels 8-connected components; returns the label image (0 = background) and
// the raster-first pixel of each component.
std::pair<std::vector<int>, std::vector<std::pair<int, int>>> label_components(const Mask& mask) {
  const int w = mask.width();
  const int h = mask.height();
  std::vector<int> labels(static_cast<std::size_t>(w) * h, 0);
  std::vector<std::pair<int, int>> starts;
  std::vector<std::pair<int, int>> stack;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t idx = static_cast<std::size_t>(y) * w + x;
      if (!mask.get(x, y) || labels[idx] != 0) continue;
      const int label = static_cast<int>(starts.size()) + 1;
      starts.emplace_back(x, y);
      labels[idx] = label;
      stack.emplace_back(x, y);
      while (!stack.empty()) {
        const auto [cx, cy] = stack.back();
        stack.pop_back();
        for (const auto& d : kDirs) {
          const int nx = cx + d[0];
          const int ny = cy + d[1];
          if (!mask.get_or_false(nx, ny)) continue;
          const std::size_t nidx = static_cast<std::size_t>(ny) * w + nx;
          if (labels[nidx] != 0) continue;
          labels[nidx] = label;
          stack.emplace_back(nx, ny);
        }
      }
    }
  }
  return {std::move(labels), std::move(starts)};
}

// Outer border following (Suzuki & Abe, 1985) restricted to one component.
std::vector<std::pair<int, int>> trace_outer_border(const std::vector<int>& labels, int w, int h,
                                                    int label, int sx, int sy) {
  auto inside = [&](int x, int y) {
    return x >= 0 && y >= 0 && x < w && y < h &&
           labels[static_cast<std::size_t>(y) * w + x] == label;
  };

  std::vector<std::pair<int, int>> border;
  // The west neighbour of the raster-first pixel is never in the component.
  int first_dir = -1;
  for (int k = 0; k < 8; ++k) {
    const int d = (4 + k) % 8;
    if (inside(sx + kDirs[static_cast<std::size_t>(d)][0], sy + kDirs[static_cast<std::size_t>(d)][1])) {
      first_dir = d;
      break;
    }
  }
  if (first_dir < 0) {
    border.emplace_back(sx, sy);
    return border;
  }
  const int x1 = sx + kDirs[static_cast<std::size_t>(first_dir)][0];
  const int y1 = sy + kDirs[static_cast<std::size_t>(first_dir)][1];

  int px = x1, py = y1;  // previous border pixel
  int cx = sx, cy = sy;  // current border pixel
  const std::size_t limit = 4 * static_cast<std::size_t>(w) * h + 8;
  while (border.size() < limit) {
    const int back = direction_to(cx, cy, px, py);
    int nx = px, ny = py;
    for (int k = 1; k <= 8; ++k) {
      const int d = ((back - k) % 8 + 8) % 8;
      const int tx = cx + kDirs[static_cast<std::size_t>(d)][0];
      const int ty = cy + kDirs[static_cast<std::size_t>(d)][1];
      if (inside(tx, ty)) {
        nx = tx;
        ny = ty;
        break;
      }
    }
    border.emplace_back(cx, cy);
    if (nx == sx && ny == sy && cx == x1 && cy == y1) break;
    px = cx;
    py = cy;
    cx = nx;
    cy = ny;
  }
  return border;
}

void rdp_range(std::span<const NormPoint> pts, std::size_t first, std::size_t last, double epsilon,
               std::vector<char>& keep) {
  // Indices are positions in the unrolled loop; `last` may equal pts.size()
  // and then refers back to pts[0].
  std::vector<std::pair<std::size_t, std::size_t>> stack{{first, last}};
  const std::size_t n = pts.size();
  while (!stack.empty()) {
    const auto [lo, hi] = stack.back();
    stack.pop_back();
    if (hi <= lo + 1) continue;
    const NormPoint a = pts[lo % n];
    const NormPoint b = pts[hi % n];
    double best = -1.0;
    std::size_t best_idx = lo;
    for (std::size_t i = lo + 1; i < hi; ++i) {
      const double d = point_segment_distance(pts[i % n], a, b);
      if (d > best) {
        best = d;
        best_idx = i;
      }
    }
    if (best > epsilon) {
      keep[best_idx % n] = 1;
      stack.emplace_back(best_idx, hi);
      stack.emplace_back(lo, best_idx);
    }
  }
}

}  // namespace

BoundingBox BoundingBox::normalized() const noexcept {
  auto c = [](double v) { return std::clamp(v, 0.0, 1.0); };
  return {c(std::min(x_min, x_max)), c(std::min(y_min, y_max)), c(std::max(x_min, x_max)),
          c(std::max(y_min, y_max))};
}

std::string_view to_string(GridKind kind) noexcept {
  switch (kind) {
    case GridKind::RuleOfThirds: return "rule_of_thirds";
    case GridKind::CentralCross: return "central_cross";
    case GridKind::CentralCircle: return "central_circle";
  }
  return "rule_of_thirds";
}

std::optional<GridKind> parse_grid_kind(std::string_view name) noexcept {
  if (name == "rule_of_thirds") return GridKind::RuleOfThirds;
  if (name == "central_cross") return GridKind::CentralCross;
  if (name == "central_circle") return GridKind::CentralCircle;
  return std::nullopt;
}

double normalize_pixel(int index, int extent) noexcept {
  return (static_cast<double>(index) + 0.5) / static_cast<double>(extent);
}

double distance(NormPoint a, NormPoint b) noexcept { return std::hypot(a.x - b.x, a.y - b.y); }

double point_segment_distance(NormPoint p, NormPoint a, NormPoint b) noexcept {
  const double vx = b.x - a.x;
  const double vy = b.y - a.y;
  const double len2 = vx * vx + vy * vy;
  if (len2 == 0.0) return distance(p, a);
  const double t = std::clamp(((p.x - a.x) * vx + (p.y - a.y) * vy) / len2, 0.0, 1.0);
  return distance(p, {a.x + t * vx, a.y + t * vy});
}

std::vector<DenseContour> extract_outer_contours(const Mask& mask) {
  if (mask.empty() || !mask.any()) {
    throw Error(ErrorCode::EmptyMask, "mask has no foreground pixels");
  }
  const int w = mask.width();
  const int h = mask.height();
  const auto [labels, starts] = label_components(mask);
  std::vector<DenseContour> contours;
  contours.reserve(starts.size());
  for (std::size_t i = 0; i < starts.size(); ++i) {
    const auto border = trace_outer_border(labels, w, h, static_cast<int>(i) + 1, starts[i].first,
                                           starts[i].second);
    DenseContour c;
    c.points.reserve(border.size());
    for (const auto& [x, y] : border) c.points.push_back({normalize_pixel(x, w), normalize_pixel(y, h)});
    contours.push_back(std::move(c));
  }
  return contours;
}

PolygonContour simplify_rdp(const DenseContour& contour, double epsilon, int id, std::string label) {
  if (!(epsilon >= 0.0)) {
    throw Error(ErrorCode::BadRequest, "RDP epsilon must be non-negative");
  }
  std::vector<NormPoint> pts;
  pts.reserve(contour.points.size());
  for (const NormPoint& p : contour.points) {
    if (pts.empty() || !(pts.back() == p)) pts.push_back(p);
  }
  while (pts.size() > 1 && pts.back() == pts.front()) pts.pop_back();
  if (pts.size() < 3) {
    throw Error(ErrorCode::DegenerateResult, "contour has fewer than three distinct points");
  }

  const std::size_t n = pts.size();
  std::size_t far = 0;
  double far_dist = -1.0;
  for (std::size_t i = 1; i < n; ++i) {
    const double d = distance(pts[0], pts[i]);
    if (d > far_dist) {
      far_dist = d;
      far = i;
    }
  }

  std::vector<char> keep(n, 0);
  keep[0] = 1;
  keep[far] = 1;
  rdp_range(pts, 0, far, epsilon, keep);
  rdp_range(pts, far, n, epsilon, keep);

  PolygonContour poly;
  poly.id = id;
  poly.label = std::move(label);
  for (std::size_t i = 0; i < n; ++i) {
    if (keep[i]) poly.vertices.push_back(pts[i]);
  }
  if (poly.vertices.size() < 3) {
    throw Error(ErrorCode::DegenerateResult,
                "simplification left " + std::to_string(poly.vertices.size()) + " vertices");
  }
  return poly;
}

std::vector<SampledPoint> sample_polygon_points(const PolygonContour& polygon) {
  const auto& v = polygon.vertices;
  const std::size_t n = v.size();
  std::vector<SampledPoint> out;
  if (n == 0) return out;
  double shortest = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double len = distance(v[i], v[(i + 1) % n]);
    if (len > 0.0) shortest = std::min(shortest, len);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const NormPoint a = v[i];
    const NormPoint b = v[(i + 1) % n];
    const double len = distance(a, b);
    const long quota = std::isfinite(shortest) ? std::max(1L, std::lround(len / shortest)) : 1L;
    for (long k = 0; k < quota; ++k) {
      const double t = static_cast<double>(k) / static_cast<double>(quota);
      out.push_back({{a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)}, polygon.id});
    }
  }
  return out;
}

double iou(const BoundingBox& a, const BoundingBox& b) noexcept {
  const double ix = std::max(0.0, std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min));
  const double iy = std::max(0.0, std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min));
  const double inter = ix * iy;
  const double uni = a.area() + b.area() - inter;
  if (!(uni > 0.0)) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

bool iou_zero_area(const BoundingBox& a, const BoundingBox& b) noexcept {
  return a.degenerate() && b.degenerate();
}

GridOverlay generate_grid(GridKind kind) {
  GridOverlay g;
  g.kind = kind;
  auto vertical = [](double x) { return OverlaySegment{{x, 0.0}, {x, 1.0}}; };
  auto horizontal = [](double y) { return OverlaySegment{{0.0, y}, {1.0, y}}; };
  switch (kind) {
    case GridKind::RuleOfThirds:
      g.lines = {vertical(1.0 / 3.0), vertical(2.0 / 3.0), horizontal(1.0 / 3.0),
                 horizontal(2.0 / 3.0)};
      break;
    case GridKind::CentralCross:
      g.lines = {vertical(0.5), horizontal(0.5)};
      break;
    case GridKind::CentralCircle:
      g.circle = OverlayCircle{{0.5, 0.5}, 0.5};
      break;
  }
  return g;
}

BoundingBox bbox_of_contours(std::span<const DenseContour> contours) {
  bool seen = false;
  BoundingBox box{};
  for (const DenseContour& c : contours) {
    for (const NormPoint& p : c.points) {
      if (!seen) {
        box = {p.x, p.y, p.x, p.y};
        seen = true;
        continue;
      }
      box.x_min = std::min(box.x_min, p.x);
      box.y_min = std::min(box.y_min, p.y);
      box.x_max = std::max(box.x_max, p.x);
      box.y_max = std::max(box.y_max, p.y);
    }
  }
  if (!seen) throw Error(ErrorCode::EmptyInput, "no contour points to bound");
  return box;
}

Mask rasterize_box(const BoundingBox& box, int width, int height) {
  Mask m(width, height);
  for (int y = 0; y < height; ++y) {
    const double cy = (y + 0.5) / height;
    if (cy < box.y_min || cy > box.y_max) continue;
    for (int x = 0; x < width; ++x) {
      const double cx = (x + 0.5) / width;
      if (cx >= box.x_min && cx <= box.x_max) m.set(x, y);
    }
  }
  return m;
}

Mask rasterize_polygon(std::span<const NormPoint> polygon, int width, int height) {
  if (polygon.size() < 3) {
    throw Error(ErrorCode::DegeneratePolygon, "polygon needs at least three points");
  }
  Mask m(width, height);
  const std::size_t n = polygon.size();
  std::vector<double> crossings;
  for (int y = 0; y < height; ++y) {
    const double cy = (y + 0.5) / height;
    crossings.clear();
    for (std::size_t i = 0; i < n; ++i) {
      const NormPoint a = polygon[i];
      const NormPoint b = polygon[(i + 1) % n];
      // Half-open rule so a vertex on the scanline is counted once.
      if ((a.y <= cy && b.y > cy) || (b.y <= cy && a.y > cy)) {
        crossings.push_back(a.x + (cy - a.y) / (b.y - a.y) * (b.x - a.x));
      }
    }
    std::sort(crossings.begin(), crossings.end());
    for (std::size_t i = 0; i + 1 < crossings.size(); i += 2) {
      for (int x = 0; x < width; ++x) {
        const double cx = (x + 0.5) / width;
        if (cx >= crossings[i] && cx < crossings[i + 1]) m.set(x, y);
      }
    }
  }
  return m;
}

}  // namespace atelier
