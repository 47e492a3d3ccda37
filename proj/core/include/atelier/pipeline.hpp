#pragma once

#include <vector>

#include "atelier/composition.hpp"
#include "atelier/matching.hpp"
#include "atelier/palette.hpp"
#include "atelier/segmentation.hpp"

namespace atelier {

struct CompositionOptions {
  double epsilon = kDefaultRdpEpsilon;
  RansacConfig ransac;
  std::size_t k_lines = 4;
  /// Halvings of epsilon tried when a polygon collapses below three vertices.
  int max_epsilon_retries = 8;
};

struct CompositionResult {
  std::vector<PolygonContour> polygons;
  std::vector<CompositionLine> all_lines;
  std::vector<CompositionLine> lines;  // top k
  /// Smallest epsilon actually used; differs from the request after retries.
  double epsilon_used = 0.0;
  std::size_t sampled_points = 0;
  std::string provider;
  bool box_fallback = false;
};

/// Largest-area outer contour of a mask (shoelace area of the traced border).
DenseContour dominant_contour(const Mask& mask);

/// Segmentation masks -> outer contours -> RDP polygons -> weighted samples
/// -> cross-object RANSAC -> top k.
CompositionResult compose_from_masks(const std::vector<LabeledMask>& masks,
                                     const CompositionOptions& opts);

CompositionResult compose_guidance(const ImageBuffer& reference, const SegmentationPrompt& prompt,
                                   SegmentationProvider& provider, const CompositionOptions& opts);

/// Extracts dominant clusters from both images in `mode`, matches them per
/// reference cluster and renders feedback.
std::vector<MatchPair> compare_images(const ImageBuffer& canvas, const ImageBuffer& reference,
                                      ClusterMode mode, const PaletteOptions& opts,
                                      const FeedbackTolerances& tol);

}  // namespace atelier
