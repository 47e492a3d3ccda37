#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "atelier/geometry.hpp"

namespace atelier {

/// Line in normal form: normal . p = offset, with |normal| = 1.
///
/// Canonical sign: offset >= 0, and for lines through the origin the normal
/// points into the half plane x > 0 (or y > 0 when vertical normal).
struct LineModel {
  double nx = 0.0;
  double ny = 1.0;
  double offset = 0.0;

  double signed_distance(NormPoint p) const noexcept { return nx * p.x + ny * p.y - offset; }
  double distance(NormPoint p) const noexcept;

  /// Line through two distinct points; nullopt when they coincide.
  static std::optional<LineModel> through(NormPoint a, NormPoint b) noexcept;
};

struct LineSegment {
  NormPoint a;
  NormPoint b;
};

struct CompositionLine {
  LineModel model;
  std::optional<LineSegment> segment;
  std::size_t inliers = 0;
  /// Inlier count over the total number of sampled points (not the remaining ones).
  double inlier_fraction = 0.0;
  /// Mean perpendicular distance of the inliers.
  double mean_distance = 0.0;
  int rank = 0;
  /// Sorted, unique polygon ids with at least one inlier.
  std::vector<int> supporting_polygons;
  /// Indices into the input point list, ascending.
  std::vector<std::size_t> inlier_indices;
};

struct RansacConfig {
  double theta_dis = 0.04;
  double theta_inl = 0.10;
  int iterations = 1000;
  std::uint64_t seed = 0;
  int max_lines = 16;

  /// Throws Error(InvalidConfig) when a field is out of range.
  void validate() const;
};

/// Sequential cross-object RANSAC.
///
/// Each round draws `iterations` candidate lines, each through two active
/// points taken from two different polygons, and scores a candidate by the
/// number of active points within `theta_dis`. The best candidate (most
/// inliers, then smaller mean inlier distance, then earlier draw) becomes a
/// composition line only if its inliers reach theta_inl * N where N counts
/// every input point and span at least two polygons. Accepted inliers leave
/// the active set; rounds stop at the first rejection or after `max_lines`.
///
/// Throws Error(NoPoints) on empty input. A single-polygon input yields no
/// lines.
std::vector<CompositionLine> fit_composition_lines(std::span<const SampledPoint> points,
                                                   const RansacConfig& cfg);

/// First min(k, size) lines in rank order.
std::vector<CompositionLine> top_k(std::span<const CompositionLine> lines, std::size_t k);

/// Chord of the infinite line through the unit square, or nullopt if it misses.
std::optional<LineSegment> clip_to_unit_square(const LineModel& model) noexcept;

}  // namespace atelier
