#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "atelier/color.hpp"
#include "atelier/geometry.hpp"
#include "atelier/image.hpp"

namespace atelier {

enum class ClusterMode { Value, Color };
enum class PaletteSource { Canvas, Reference };

std::string_view to_string(ClusterMode mode) noexcept;
std::string_view to_string(PaletteSource source) noexcept;

struct DominantCluster {
  LabColor center_lab;
  Rgb8 swatch_srgb;
  /// Share of all image pixels, including those removed by the extreme filter.
  double pixel_fraction = 0.0;
  std::vector<DenseContour> region_contours;
  BoundingBox bbox;
  ClusterMode mode = ClusterMode::Value;
  /// Set when no pixel lies within the region threshold of the center and the
  /// region was taken from the cluster's own assigned pixels instead.
  bool region_fallback = false;
};

struct Palette {
  std::vector<DominantCluster> clusters;
  PaletteSource source = PaletteSource::Reference;
  ClusterMode mode = ClusterMode::Value;
  int k_requested = 0;
  std::uint64_t seed = 0;
};

struct PaletteOptions {
  int k = 5;
  std::uint64_t seed = 0;
  int max_iterations = 100;
  /// Convergence threshold on the largest center move, in Lab units.
  double tolerance = 1e-4;
  /// Region membership threshold: |dL| in value mode, Lab distance in color mode.
  double region_threshold = 5.0;
  /// Value mode drops pixels with L* outside [extreme_low, extreme_high].
  double extreme_low = 2.0;
  double extreme_high = 98.0;
  /// Images larger than this (either side) are subsampled before clustering.
  int max_cluster_dim = 512;
};

/// K-means over weighted points in Lab space.
struct KMeansResult {
  std::vector<std::array<double, 3>> centers;
  std::vector<int> labels;
  std::vector<double> weights;  // per center
  std::vector<double> objective_history;  // weighted SSE after each assignment step
  int iterations = 0;
};

/// k-means++ seeding followed by Lloyd iterations; `labels` are the nearest
/// centers (ties to the lower index) for the returned centers.
KMeansResult weighted_kmeans(std::span<const std::array<double, 3>> points,
                             std::span<const double> weights, int k, std::uint64_t seed,
                             int max_iterations, double tolerance);

/// Dominant values (a*, b* zeroed) or colors, sorted by descending pixel share.
/// Throws Error(AllPixelsFiltered) when the value-mode extreme filter removes
/// every pixel. k is silently reduced to the number of distinct features.
Palette extract_dominant(const ImageBuffer& img, ClusterMode mode, const PaletteOptions& opts,
                         PaletteSource source = PaletteSource::Reference);

struct RegionMask {
  Mask mask;
  std::vector<DenseContour> contours;
  BoundingBox bbox;
};

/// Pixels near the cluster center. Throws Error(EmptyRegion) if none qualify.
RegionMask region_mask_for(const ImageBuffer& img, const DominantCluster& cluster,
                           double threshold = 5.0);

/// Keeps the region of the dominant color nearest to the hovered pixel and
/// paints everything else white. Throws Error(OutOfBounds) or Error(ModeMismatch).
ImageBuffer isolate_color_preview(const ImageBuffer& reference, const Palette& palette, int x,
                                  int y, double threshold = 5.0);

}  // namespace atelier
