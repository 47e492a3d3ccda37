#include "atelier/pipeline.hpp"

#include <cmath>

#include "atelier/error.hpp"

namespace atelier {

namespace {

double shoelace_area(const std::vector<NormPoint>& pts) {
  double twice = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const NormPoint& a = pts[i];
    const NormPoint& b = pts[(i + 1) % pts.size()];
    twice += a.x * b.y - b.x * a.y;
  }
  return std::fabs(twice) / 2.0;
}

}  // namespace

DenseContour dominant_contour(const Mask& mask) {
  std::vector<DenseContour> contours = extract_outer_contours(mask);
  std::size_t best = 0;
  double best_area = -1.0;
  for (std::size_t i = 0; i < contours.size(); ++i) {
    const double area = shoelace_area(contours[i].points);
    // Ties (e.g. single-pixel specks) fall back to the longer border.
    if (area > best_area ||
        (area == best_area && contours[i].points.size() > contours[best].points.size())) {
      best_area = area;
      best = i;
    }
  }
  return std::move(contours[best]);
}

CompositionResult compose_from_masks(const std::vector<LabeledMask>& masks,
                                     const CompositionOptions& opts) {
  if (!(opts.epsilon >= 0.0)) throw Error(ErrorCode::BadRequest, "epsilon must be non-negative");
  opts.ransac.validate();

  CompositionResult result;
  result.epsilon_used = opts.epsilon;
  int next_id = 0;
  for (const LabeledMask& m : masks) {
    if (!m.mask.any()) continue;
    const DenseContour contour = dominant_contour(m.mask);
    double eps = opts.epsilon;
    for (int attempt = 0;; ++attempt) {
      try {
        result.polygons.push_back(simplify_rdp(contour, eps, next_id, m.label));
        ++next_id;
        result.epsilon_used = std::min(result.epsilon_used, eps);
        break;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::DegenerateResult) throw;
        // A contour with fewer than three distinct points never recovers.
        if (attempt >= opts.max_epsilon_retries || contour.points.size() < 3 || eps == 0.0) {
          throw Error(ErrorCode::DegenerateResult,
                      "mask '" + m.label + "' stays degenerate down to epsilon " +
                          std::to_string(eps));
        }
        eps /= 2.0;
      }
    }
  }
  if (result.polygons.empty()) throw Error(ErrorCode::NoDetections, "all masks were empty");

  std::vector<SampledPoint> points;
  for (const PolygonContour& p : result.polygons) {
    auto s = sample_polygon_points(p);
    points.insert(points.end(), s.begin(), s.end());
  }
  result.sampled_points = points.size();
  result.all_lines = fit_composition_lines(points, opts.ransac);
  result.lines = top_k(result.all_lines, opts.k_lines);
  return result;
}

CompositionResult compose_guidance(const ImageBuffer& reference, const SegmentationPrompt& prompt,
                                   SegmentationProvider& provider, const CompositionOptions& opts) {
  const SegmentationResult seg = segment(reference, prompt, provider);
  CompositionResult result = compose_from_masks(seg.masks, opts);
  result.provider = seg.provider;
  result.box_fallback = seg.box_fallback;
  return result;
}

std::vector<MatchPair> compare_images(const ImageBuffer& canvas, const ImageBuffer& reference,
                                      ClusterMode mode, const PaletteOptions& opts,
                                      const FeedbackTolerances& tol) {
  if (canvas.width() != reference.width() || canvas.height() != reference.height()) {
    throw Error(ErrorCode::DimensionMismatch,
                "canvas and reference must share dimensions before comparison");
  }
  const Palette ref = extract_dominant(reference, mode, opts, PaletteSource::Reference);
  const Palette cnv = extract_dominant(canvas, mode, opts, PaletteSource::Canvas);
  return compare_palettes(cnv, ref, tol);
}

}  // namespace atelier
