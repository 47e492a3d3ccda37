#include "atelier/palette.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <unordered_map>

#include "atelier/error.hpp"

namespace atelier {

namespace {

using Vec3 = std::array<double, 3>;

double sq_dist(const Vec3& a, const Vec3& b) noexcept {
  const double d0 = a[0] - b[0];
  const double d1 = a[1] - b[1];
  const double d2 = a[2] - b[2];
  return d0 * d0 + d1 * d1 + d2 * d2;
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Weighted draw: index i with probability w[i] / sum(w).
std::size_t weighted_pick(std::mt19937_64& rng, std::span<const double> w, double total) {
  const double target = uniform01(rng) * total;
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] <= 0.0) continue;
    acc += w[i];
    last_positive = i;
    if (target < acc) return i;
  }
  return last_positive;
}

int nearest(const Vec3& p, const std::vector<Vec3>& centers) {
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centers.size(); ++c) {
    const double d = sq_dist(p, centers[c]);
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(c);
    }
  }
  return best;
}

Vec3 feature_of(const LabColor& lab, ClusterMode mode) {
  if (mode == ClusterMode::Value) return {lab.L, 0.0, 0.0};
  return {lab.L, lab.a, lab.b};
}

std::uint32_t pack(Rgb8 c) noexcept {
  return (static_cast<std::uint32_t>(c.r) << 16) | (static_cast<std::uint32_t>(c.g) << 8) | c.b;
}

Rgb8 unpack(std::uint32_t v) noexcept {
  return {static_cast<std::uint8_t>(v >> 16), static_cast<std::uint8_t>(v >> 8),
          static_cast<std::uint8_t>(v)};
}

// Per-pixel Lab, computed once per distinct color.
std::vector<LabColor> lab_image(const ImageBuffer& img) {
  std::unordered_map<std::uint32_t, LabColor> cache;
  std::vector<LabColor> out(img.size());
  auto px = img.pixels();
  for (std::size_t i = 0; i < px.size(); ++i) {
    const std::uint32_t key = pack(px[i]);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, rgb_to_lab(px[i])).first;
    out[i] = it->second;
  }
  return out;
}

bool in_region(const LabColor& lab, const DominantCluster& cluster, double threshold) {
  if (cluster.mode == ClusterMode::Value) {
    return std::fabs(lab.L - cluster.center_lab.L) <= threshold;
  }
  return lab_distance(lab, cluster.center_lab) <= threshold;
}

Mask region_from_lab(const std::vector<LabColor>& labs, int w, int h,
                     const DominantCluster& cluster, double threshold) {
  Mask m(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (in_region(labs[static_cast<std::size_t>(y) * w + x], cluster, threshold)) m.set(x, y);
    }
  }
  return m;
}

}  // namespace

std::string_view to_string(ClusterMode mode) noexcept {
  return mode == ClusterMode::Value ? "value" : "color";
}

std::string_view to_string(PaletteSource source) noexcept {
  return source == PaletteSource::Canvas ? "canvas" : "reference";
}

KMeansResult weighted_kmeans(std::span<const Vec3> points, std::span<const double> weights, int k,
                             std::uint64_t seed, int max_iterations, double tolerance) {
  KMeansResult res;
  const std::size_t n = points.size();
  if (n == 0 || k <= 0) return res;
  std::mt19937_64 rng(seed);

  // k-means++ seeding, weighted by pixel count.
  double total_w = 0.0;
  for (double w : weights) total_w += w;
  std::vector<Vec3> centers;
  centers.push_back(points[weighted_pick(rng, weights, total_w)]);
  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = sq_dist(points[i], centers[0]);
  while (static_cast<int>(centers.size()) < k) {
    std::vector<double> score(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      score[i] = weights[i] * d2[i];
      total += score[i];
    }
    if (!(total > 0.0)) break;  // fewer distinct points than k
    const Vec3 c = points[weighted_pick(rng, score, total)];
    centers.push_back(c);
    for (std::size_t i = 0; i < n; ++i) d2[i] = std::min(d2[i], sq_dist(points[i], c));
  }

  std::vector<int> labels(n, -1);
  for (int iter = 0; iter < std::max(1, max_iterations); ++iter) {
    bool changed = false;
    double objective = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const int c = nearest(points[i], centers);
      if (c != labels[i]) changed = true;
      labels[i] = c;
      objective += weights[i] * sq_dist(points[i], centers[static_cast<std::size_t>(c)]);
    }
    res.objective_history.push_back(objective);
    res.iterations = iter + 1;
    if (!changed && iter > 0) break;

    std::vector<Vec3> sums(centers.size(), Vec3{0, 0, 0});
    std::vector<double> wsum(centers.size(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto c = static_cast<std::size_t>(labels[i]);
      for (int d = 0; d < 3; ++d) sums[c][static_cast<std::size_t>(d)] += weights[i] * points[i][static_cast<std::size_t>(d)];
      wsum[c] += weights[i];
    }
    double max_shift = 0.0;
    for (std::size_t c = 0; c < centers.size(); ++c) {
      if (wsum[c] <= 0.0) continue;  // empty cluster keeps its center
      const Vec3 updated{sums[c][0] / wsum[c], sums[c][1] / wsum[c], sums[c][2] / wsum[c]};
      max_shift = std::max(max_shift, std::sqrt(sq_dist(updated, centers[c])));
      centers[c] = updated;
    }
    if (max_shift <= tolerance) {
      double final_objective = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        labels[i] = nearest(points[i], centers);
        final_objective += weights[i] * sq_dist(points[i], centers[static_cast<std::size_t>(labels[i])]);
      }
      res.objective_history.push_back(final_objective);
      break;
    }
  }

  res.weights.assign(centers.size(), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    labels[i] = nearest(points[i], centers);
    res.weights[static_cast<std::size_t>(labels[i])] += weights[i];
  }
  res.centers = std::move(centers);
  res.labels = std::move(labels);
  return res;
}

Palette extract_dominant(const ImageBuffer& img, ClusterMode mode, const PaletteOptions& opts,
                         PaletteSource source) {
  if (opts.k < 1) throw Error(ErrorCode::InvalidConfig, "palette k must be >= 1");
  if (img.empty()) throw Error(ErrorCode::BadImage, "empty image");

  const int w = img.width();
  const int h = img.height();
  const int step = std::max(1, (std::max(w, h) + opts.max_cluster_dim - 1) / std::max(1, opts.max_cluster_dim));

  // Histogram of distinct colors over the (possibly subsampled) grid; sampling
  // at block centers keeps original colors intact.
  std::map<std::uint32_t, double> histogram;
  double sampled = 0.0;
  for (int y = step / 2; y < h; y += step) {
    for (int x = step / 2; x < w; x += step) {
      histogram[pack(img.at(x, y))] += 1.0;
      sampled += 1.0;
    }
  }

  std::map<Vec3, double> features;
  for (const auto& [key, count] : histogram) {
    const LabColor lab = rgb_to_lab(unpack(key));
    if (mode == ClusterMode::Value && (lab.L < opts.extreme_low || lab.L > opts.extreme_high)) {
      continue;
    }
    features[feature_of(lab, mode)] += count;
  }
  if (features.empty()) {
    throw Error(ErrorCode::AllPixelsFiltered,
                "every pixel was removed by the extreme black/white filter");
  }

  std::vector<Vec3> points;
  std::vector<double> weights;
  points.reserve(features.size());
  weights.reserve(features.size());
  for (const auto& [f, count] : features) {
    points.push_back(f);
    weights.push_back(count);
  }
  const int k = std::min<int>(opts.k, static_cast<int>(points.size()));
  const KMeansResult km =
      weighted_kmeans(points, weights, k, opts.seed, opts.max_iterations, opts.tolerance);

  Palette palette;
  palette.source = source;
  palette.mode = mode;
  palette.k_requested = opts.k;
  palette.seed = opts.seed;
  for (std::size_t c = 0; c < km.centers.size(); ++c) {
    if (km.weights[c] <= 0.0) continue;
    DominantCluster cl;
    cl.mode = mode;
    cl.center_lab = {km.centers[c][0], km.centers[c][1], km.centers[c][2]};
    if (mode == ClusterMode::Value) cl.center_lab.a = cl.center_lab.b = 0.0;
    cl.swatch_srgb = lab_to_rgb8(cl.center_lab);
    cl.pixel_fraction = km.weights[c] / sampled;
    palette.clusters.push_back(std::move(cl));
  }
  std::sort(palette.clusters.begin(), palette.clusters.end(),
            [](const DominantCluster& a, const DominantCluster& b) {
              if (a.pixel_fraction != b.pixel_fraction) return a.pixel_fraction > b.pixel_fraction;
              if (a.center_lab.L != b.center_lab.L) return a.center_lab.L < b.center_lab.L;
              if (a.center_lab.a != b.center_lab.a) return a.center_lab.a < b.center_lab.a;
              return a.center_lab.b < b.center_lab.b;
            });

  const std::vector<LabColor> labs = lab_image(img);
  std::vector<int> owner;  // lazily built nearest-center partition for fallbacks
  for (std::size_t c = 0; c < palette.clusters.size(); ++c) {
    DominantCluster& cl = palette.clusters[c];
    Mask m = region_from_lab(labs, w, h, cl, opts.region_threshold);
    if (!m.any()) {
      if (owner.empty()) {
        std::vector<Vec3> centers;
        for (const auto& other : palette.clusters) centers.push_back({other.center_lab.L, other.center_lab.a, other.center_lab.b});
        owner.assign(labs.size(), -1);
        for (std::size_t i = 0; i < labs.size(); ++i) {
          const LabColor& lab = labs[i];
          if (mode == ClusterMode::Value && (lab.L < opts.extreme_low || lab.L > opts.extreme_high)) continue;
          owner[i] = nearest(feature_of(lab, mode), centers);
        }
      }
      for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
          if (owner[static_cast<std::size_t>(y) * w + x] == static_cast<int>(c)) m.set(x, y);
        }
      }
      cl.region_fallback = true;
    }
    if (m.any()) {
      cl.region_contours = extract_outer_contours(m);
      cl.bbox = bbox_of_contours(cl.region_contours);
    }
  }
  return palette;
}

RegionMask region_mask_for(const ImageBuffer& img, const DominantCluster& cluster,
                           double threshold) {
  RegionMask out;
  out.mask = region_from_lab(lab_image(img), img.width(), img.height(), cluster, threshold);
  if (!out.mask.any()) {
    throw Error(ErrorCode::EmptyRegion, "no pixel lies within the region threshold of the cluster");
  }
  out.contours = extract_outer_contours(out.mask);
  out.bbox = bbox_of_contours(out.contours);
  return out;
}

ImageBuffer isolate_color_preview(const ImageBuffer& reference, const Palette& palette, int x,
                                  int y, double threshold) {
  if (palette.mode != ClusterMode::Color) {
    throw Error(ErrorCode::ModeMismatch, "color isolation needs a color-mode palette");
  }
  if (!reference.contains(x, y)) {
    throw Error(ErrorCode::OutOfBounds, "hover position lies outside the image");
  }
  if (palette.clusters.empty()) throw Error(ErrorCode::EmptyPalette, "palette has no clusters");

  const LabColor hovered = rgb_to_lab(reference.at(x, y));
  std::size_t chosen = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < palette.clusters.size(); ++c) {
    const double d = lab_distance(hovered, palette.clusters[c].center_lab);
    if (d < best) {
      best = d;
      chosen = c;
    }
  }
  const Mask m = region_from_lab(lab_image(reference), reference.width(), reference.height(),
                                 palette.clusters[chosen], threshold);
  ImageBuffer out(reference.width(), reference.height(), kWhite);
  for (int yy = 0; yy < reference.height(); ++yy) {
    for (int xx = 0; xx < reference.width(); ++xx) {
      if (m.get(xx, yy)) out.at(xx, yy) = reference.at(xx, yy);
    }
  }
  return out;
}

}  // namespace atelier
