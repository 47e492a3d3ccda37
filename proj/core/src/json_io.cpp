#include "atelier/json_io.hpp"

#include <cstdio>

#include "atelier/error.hpp"

namespace atelier {

namespace {

double number_at(const Json& j, std::size_t i) {
  if (!j.at(i).is_number()) throw Error(ErrorCode::BadRequest, "expected a number");
  return j.at(i).get<double>();
}

}  // namespace

std::string hex_color(Rgb8 c) {
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", c.r, c.g, c.b);
  return buf;
}

Json to_json(NormPoint p) { return Json::array({p.x, p.y}); }

Json to_json(const BoundingBox& b) { return Json::array({b.x_min, b.y_min, b.x_max, b.y_max}); }

Json to_json(const DenseContour& c) {
  Json pts = Json::array();
  for (const NormPoint& p : c.points) pts.push_back(to_json(p));
  return pts;
}

Json to_json(const PolygonContour& p) {
  Json verts = Json::array();
  for (const NormPoint& v : p.vertices) verts.push_back(to_json(v));
  return {{"id", p.id}, {"label", p.label}, {"vertices", std::move(verts)}};
}

Json to_json(const GridOverlay& g) {
  Json lines = Json::array();
  for (const auto& l : g.lines) lines.push_back(Json::array({to_json(l.a), to_json(l.b)}));
  Json j{{"kind", std::string(to_string(g.kind))}, {"lines", std::move(lines)}};
  if (g.circle) {
    j["circle"] = {{"center", to_json(g.circle->center)}, {"radius", g.circle->radius}};
  }
  return j;
}

Json to_json(const CompositionLine& line) {
  Json j{{"normal", Json::array({line.model.nx, line.model.ny})},
         {"offset", line.model.offset},
         {"inliers", line.inliers},
         {"inlier_fraction", line.inlier_fraction},
         {"rank", line.rank},
         {"polygons", line.supporting_polygons}};
  j["segment"] = line.segment ? Json::array({to_json(line.segment->a), to_json(line.segment->b)})
                              : Json(nullptr);
  return j;
}

Json lines_to_json(std::span<const CompositionLine> lines) {
  Json arr = Json::array();
  for (const auto& l : lines) arr.push_back(to_json(l));
  return arr;
}

Json to_json(const RansacConfig& cfg) {
  return {{"theta_dis", cfg.theta_dis},   {"theta_inl", cfg.theta_inl},
          {"iterations", cfg.iterations}, {"seed", cfg.seed},
          {"max_lines", cfg.max_lines}};
}

Json to_json(const BlurSpec& spec) {
  return {{"filter", std::string(to_string(spec.filter))},
          {"kernel_size", spec.kernel_size},
          {"range_sigma", spec.range_sigma}};
}

Json to_json(const LabColor& lab) { return Json::array({lab.L, lab.a, lab.b}); }

Json to_json(const DominantCluster& c, bool with_regions) {
  Json j{{"lab", to_json(c.center_lab)},
         {"srgb", hex_color(c.swatch_srgb)},
         {"fraction", c.pixel_fraction},
         {"bbox", to_json(c.bbox)},
         {"mode", std::string(to_string(c.mode))}};
  if (c.region_fallback) j["region_fallback"] = true;
  if (with_regions) {
    Json regions = Json::array();
    for (const auto& rc : c.region_contours) regions.push_back(to_json(rc));
    j["contours"] = std::move(regions);
  }
  return j;
}

Json to_json(const Palette& p) {
  Json clusters = Json::array();
  for (const auto& c : p.clusters) clusters.push_back(to_json(c));
  return {{"source", std::string(to_string(p.source))},
          {"mode", std::string(to_string(p.mode))},
          {"k_requested", p.k_requested},
          {"seed", p.seed},
          {"clusters", std::move(clusters)}};
}

Json to_json(const SimilarityBreakdown& s) {
  Json j{{"s_val", s.s_val}, {"s_spt", s.s_spt}, {"s_total", s.s_total},
         {"w_val", s.w_val}, {"w_spt", s.w_spt}};
  if (s.spt_zero_area) j["spt_zero_area"] = true;
  return j;
}

Json to_json(const FeedbackMessage& m) {
  Json j{{"dimension", std::string(to_string(m.dimension))},
         {"direction", std::string(to_string(m.direction))},
         {"delta", m.delta},
         {"magnitude", m.magnitude},
         {"text", m.text}};
  if (!m.category.empty()) j["category"] = m.category;
  return j;
}

Json to_json(const MatchPair& p, bool with_regions) {
  Json feedback = Json::array();
  for (const auto& m : p.feedback) feedback.push_back(to_json(m));
  return {{"canvas", to_json(p.canvas_cluster, with_regions)},
          {"reference", to_json(p.reference_cluster, with_regions)},
          {"canvas_index", p.canvas_index},
          {"reference_index", p.reference_index},
          {"score", to_json(p.score)},
          {"feedback", std::move(feedback)}};
}

Json to_json(const FeedbackTolerances& t) {
  return {{"value", t.value}, {"hue", t.hue}, {"saturation", t.saturation}};
}

BoundingBox box_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 4) {
    throw Error(ErrorCode::BadRequest, "box must be [x0, y0, x1, y1]");
  }
  return BoundingBox{number_at(j, 0), number_at(j, 1), number_at(j, 2), number_at(j, 3)}.normalized();
}

std::vector<NormPoint> points_from_json(const Json& j) {
  if (!j.is_array()) throw Error(ErrorCode::BadRequest, "expected an array of [x, y] points");
  std::vector<NormPoint> pts;
  for (const auto& p : j) {
    if (!p.is_array() || p.size() != 2) throw Error(ErrorCode::BadRequest, "point must be [x, y]");
    pts.push_back({number_at(p, 0), number_at(p, 1)});
  }
  return pts;
}

PolygonContour polygon_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("vertices")) {
    throw Error(ErrorCode::BadRequest, "polygon needs vertices");
  }
  PolygonContour p;
  p.id = j.value("id", 0);
  p.label = j.value("label", std::string{});
  p.vertices = points_from_json(j["vertices"]);
  return p;
}

CompositionLine line_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("normal") || !j.contains("offset")) {
    throw Error(ErrorCode::BadRequest, "line needs normal and offset");
  }
  CompositionLine l;
  l.model = {number_at(j["normal"], 0), number_at(j["normal"], 1), j["offset"].get<double>()};
  l.inliers = j.value("inliers", std::size_t{0});
  l.inlier_fraction = j.value("inlier_fraction", 0.0);
  l.rank = j.value("rank", 0);
  l.supporting_polygons = j.value("polygons", std::vector<int>{});
  if (j.contains("segment") && !j["segment"].is_null()) {
    const std::vector<NormPoint> ends = points_from_json(j["segment"]);
    if (ends.size() != 2) throw Error(ErrorCode::BadRequest, "segment needs two points");
    l.segment = LineSegment{ends[0], ends[1]};
  }
  return l;
}

RansacConfig ransac_from_json(const Json& j, RansacConfig base) {
  if (!j.is_object()) return base;
  base.theta_dis = j.value("theta_dis", base.theta_dis);
  base.theta_inl = j.value("theta_inl", base.theta_inl);
  base.iterations = j.value("iterations", base.iterations);
  base.seed = j.value("seed", base.seed);
  base.max_lines = j.value("max_lines", base.max_lines);
  return base;
}

FeedbackTolerances tolerances_from_json(const Json& j, FeedbackTolerances base) {
  if (!j.is_object()) return base;
  base.value = j.value("value", base.value);
  base.hue = j.value("hue", base.hue);
  base.saturation = j.value("saturation", base.saturation);
  return base;
}

}  // namespace atelier
