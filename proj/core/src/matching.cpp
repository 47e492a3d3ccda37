#include "atelier/matching.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "atelier/error.hpp"

namespace atelier {

namespace {

constexpr std::array<HueCategory, 6> kHueCategories{{
    {"red", 0.0},
    {"yellow", 60.0},
    {"green", 120.0},
    {"cyan", 180.0},
    {"blue", 240.0},
    {"magenta", 300.0},
}};

void require_same_mode(const DominantCluster& a, const DominantCluster& b) {
  if (a.mode != b.mode) {
    throw Error(ErrorCode::ModeMismatch, "clusters come from different palette modes");
  }
}

void require_mode(const MatchPair& pair, ClusterMode mode) {
  require_same_mode(pair.canvas_cluster, pair.reference_cluster);
  if (pair.canvas_cluster.mode != mode) {
    throw Error(ErrorCode::ModeMismatch, std::string("feedback expects a ") +
                                             std::string(to_string(mode)) + "-mode pair");
  }
}

HsvColor hsv_of(const LabColor& lab) {
  RgbF c = lab_to_rgbf(lab);
  c.r = std::clamp(c.r, 0.0, 1.0);
  c.g = std::clamp(c.g, 0.0, 1.0);
  c.b = std::clamp(c.b, 0.0, 1.0);
  return rgb_to_hsv(c);
}

double arc_distance(double a, double b) noexcept { return std::fabs(hue_delta(a, b)); }

std::string whole(double v) {
  std::ostringstream s;
  s << static_cast<long>(v);
  return s.str();
}

}  // namespace

std::string_view to_string(FeedbackDimension d) noexcept {
  switch (d) {
    case FeedbackDimension::Value: return "value";
    case FeedbackDimension::Hue: return "hue";
    case FeedbackDimension::Saturation: return "saturation";
  }
  return "value";
}

std::string_view to_string(FeedbackDirection d) noexcept {
  switch (d) {
    case FeedbackDirection::Match: return "match";
    case FeedbackDirection::Lighten: return "lighten";
    case FeedbackDirection::Darken: return "darken";
    case FeedbackDirection::Warmer: return "warmer";
    case FeedbackDirection::Cooler: return "cooler";
    case FeedbackDirection::TowardCategory: return "toward_category";
    case FeedbackDirection::LessVibrant: return "less_vibrant";
    case FeedbackDirection::MoreVibrant: return "more_vibrant";
  }
  return "match";
}

HueCategory hue_category(double hue_deg) noexcept {
  const double h = wrap_degrees(hue_deg + 30.0);
  const auto sector = static_cast<std::size_t>(std::floor(h / 60.0)) % kHueCategories.size();
  return kHueCategories[sector];
}

double hue_delta(double from, double to) noexcept {
  double d = std::fmod(from - to, 360.0);
  if (d <= -180.0) d += 360.0;
  if (d > 180.0) d -= 360.0;
  return d;
}

double value_similarity(const LabColor& a, const LabColor& b) noexcept {
  const double dl = (a.L - b.L) / 100.0;
  const double da = (a.a - b.a) / 256.0;
  const double db = (a.b - b.b) / 256.0;
  return 1.0 - std::sqrt(dl * dl + da * da + db * db) / 3.0;
}

SimilarityBreakdown combined_score(const DominantCluster& canvas, const DominantCluster& reference) {
  require_same_mode(canvas, reference);
  SimilarityBreakdown s;
  s.s_val = value_similarity(canvas.center_lab, reference.center_lab);
  s.s_spt = iou(canvas.bbox, reference.bbox);
  s.spt_zero_area = iou_zero_area(canvas.bbox, reference.bbox);
  s.s_total = s.w_val * s.s_val + s.w_spt * s.s_spt;
  return s;
}

std::vector<MatchPair> match_palettes(const Palette& canvas, const Palette& reference) {
  if (canvas.clusters.empty() || reference.clusters.empty()) {
    throw Error(ErrorCode::EmptyPalette, "both palettes need at least one cluster");
  }
  if (canvas.mode != reference.mode) {
    throw Error(ErrorCode::ModeMismatch, "palettes come from different modes");
  }
  std::vector<MatchPair> pairs;
  pairs.reserve(reference.clusters.size());
  for (std::size_t r = 0; r < reference.clusters.size(); ++r) {
    const DominantCluster& ref = reference.clusters[r];
    std::size_t best = 0;
    SimilarityBreakdown best_score = combined_score(canvas.clusters[0], ref);
    for (std::size_t c = 1; c < canvas.clusters.size(); ++c) {
      const SimilarityBreakdown s = combined_score(canvas.clusters[c], ref);
      const bool wins = s.s_total > best_score.s_total ||
                        (s.s_total == best_score.s_total &&
                         canvas.clusters[c].pixel_fraction > canvas.clusters[best].pixel_fraction);
      if (wins) {
        best = c;
        best_score = s;
      }
    }
    MatchPair p;
    p.canvas_cluster = canvas.clusters[best];
    p.reference_cluster = ref;
    p.canvas_index = best;
    p.reference_index = r;
    p.score = best_score;
    pairs.push_back(std::move(p));
  }
  return pairs;
}

FeedbackMessage render_value_feedback(const MatchPair& pair, const FeedbackTolerances& tol) {
  require_mode(pair, ClusterMode::Value);
  FeedbackMessage m;
  m.dimension = FeedbackDimension::Value;
  m.delta = pair.canvas_cluster.center_lab.L - pair.reference_cluster.center_lab.L;
  m.magnitude = std::round(std::fabs(m.delta));
  if (std::fabs(m.delta) <= tol.value) {
    m.direction = FeedbackDirection::Match;
    m.text = "This value matches the reference well.";
  } else if (m.delta < 0.0) {
    m.direction = FeedbackDirection::Lighten;
    m.text = "This value is darker than the reference; try lightening it by about " +
             whole(m.magnitude) + " L* units.";
  } else {
    m.direction = FeedbackDirection::Darken;
    m.text = "This value is lighter than the reference; try darkening it by about " +
             whole(m.magnitude) + " L* units.";
  }
  return m;
}

std::vector<FeedbackMessage> render_color_feedback(const MatchPair& pair,
                                                   const FeedbackTolerances& tol) {
  require_mode(pair, ClusterMode::Color);
  const HsvColor canvas = hsv_of(pair.canvas_cluster.center_lab);
  const HsvColor reference = hsv_of(pair.reference_cluster.center_lab);

  FeedbackMessage hue;
  hue.dimension = FeedbackDimension::Hue;
  hue.delta = hue_delta(canvas.h, reference.h);
  hue.magnitude = std::round(std::fabs(hue.delta));
  const HueCategory canvas_cat = hue_category(canvas.h);
  const HueCategory reference_cat = hue_category(reference.h);
  if (canvas_cat.name != reference_cat.name) {
    hue.direction = FeedbackDirection::TowardCategory;
    hue.category = std::string(reference_cat.name);
    hue.text = "This color reads as " + std::string(canvas_cat.name) + "; it should be more " +
               hue.category + " in hue.";
  } else if (std::fabs(hue.delta) <= tol.hue) {
    hue.direction = FeedbackDirection::Match;
    hue.text = "The hue matches the reference well.";
  } else {
    // Inside one sector the distance to the warm pole is monotonic, so the
    // comparison below never ties.
    const bool warmer = arc_distance(reference.h, kWarmPole) < arc_distance(canvas.h, kWarmPole);
    hue.direction = warmer ? FeedbackDirection::Warmer : FeedbackDirection::Cooler;
    hue.text = std::string("The hue is a little ") + (warmer ? "cooler" : "warmer") +
               " than the reference; shift it slightly " + (warmer ? "warmer" : "cooler") +
               " (about " + whole(hue.magnitude) + " degrees).";
  }

  FeedbackMessage sat;
  sat.dimension = FeedbackDimension::Saturation;
  sat.delta = (canvas.s - reference.s) * 100.0;
  sat.magnitude = std::round(std::fabs(sat.delta));
  if (std::fabs(sat.delta) <= tol.saturation) {
    sat.direction = FeedbackDirection::Match;
    sat.text = "The saturation matches the reference well.";
  } else if (sat.delta > 0.0) {
    sat.direction = FeedbackDirection::LessVibrant;
    sat.text = "This color is about " + whole(sat.magnitude) +
               "% more saturated than the reference; make it less vibrant.";
  } else {
    sat.direction = FeedbackDirection::MoreVibrant;
    sat.text = "This color is about " + whole(sat.magnitude) +
               "% duller than the reference; make it more vibrant.";
  }
  return {std::move(hue), std::move(sat)};
}

std::vector<MatchPair> compare_palettes(const Palette& canvas, const Palette& reference,
                                        const FeedbackTolerances& tol) {
  std::vector<MatchPair> pairs = match_palettes(canvas, reference);
  for (MatchPair& p : pairs) {
    if (reference.mode == ClusterMode::Value) {
      p.feedback.push_back(render_value_feedback(p, tol));
    } else {
      p.feedback = render_color_feedback(p, tol);
    }
  }
  return pairs;
}

}  // namespace atelier
