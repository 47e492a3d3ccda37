#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "atelier/color.hpp"
#include "atelier/error.hpp"
#include "atelier/palette.hpp"
#include "support/synth.hpp"

using namespace atelier;

namespace {

const std::vector<Rgb8> kThree{{200, 40, 40}, {40, 160, 60}, {30, 60, 200}};
const std::vector<double> kWeights{0.5, 0.3, 0.2};

const DominantCluster& nearest_cluster(const Palette& p, const LabColor& lab) {
  return *std::min_element(p.clusters.begin(), p.clusters.end(),
                           [&](const DominantCluster& a, const DominantCluster& b) {
                             return lab_distance(a.center_lab, lab) < lab_distance(b.center_lab, lab);
                           });
}

}  // namespace

TEST(Palette, RecoversFlatColors) {
  const ImageBuffer img = testkit::banded_image(256, 256, kThree, kWeights);
  PaletteOptions opts;
  opts.k = 3;
  const Palette p = extract_dominant(img, ClusterMode::Color, opts);
  ASSERT_EQ(p.clusters.size(), 3u);
  for (std::size_t i = 0; i < kThree.size(); ++i) {
    const LabColor truth = rgb_to_lab(kThree[i]);
    const DominantCluster& c = nearest_cluster(p, truth);
    EXPECT_LT(lab_distance(c.center_lab, truth), 1.0);
    EXPECT_NEAR(c.pixel_fraction, kWeights[i], 0.01);
  }
  // Largest share first.
  EXPECT_GE(p.clusters[0].pixel_fraction, p.clusters[1].pixel_fraction);
}

TEST(Palette, DeterministicUnderSeed) {
  const ImageBuffer img = testkit::noise_image(64, 48, 2);
  PaletteOptions opts;
  opts.seed = 17;
  const Palette a = extract_dominant(img, ClusterMode::Color, opts);
  const Palette b = extract_dominant(img, ClusterMode::Color, opts);
  ASSERT_EQ(a.clusters.size(), b.clusters.size());
  for (std::size_t i = 0; i < a.clusters.size(); ++i) {
    EXPECT_EQ(a.clusters[i].center_lab.L, b.clusters[i].center_lab.L);
    EXPECT_EQ(a.clusters[i].center_lab.a, b.clusters[i].center_lab.a);
    EXPECT_EQ(a.clusters[i].pixel_fraction, b.clusters[i].pixel_fraction);
  }
}

TEST(Palette, ValueModeDropsChromaAndExtremes) {
  ImageBuffer img = testkit::banded_image(60, 20, {{0, 0, 0}, {200, 40, 40}, {255, 255, 255}},
                                          {1, 1, 1});
  PaletteOptions opts;
  opts.k = 3;
  const Palette p = extract_dominant(img, ClusterMode::Value, opts);
  ASSERT_EQ(p.clusters.size(), 1u);
  EXPECT_EQ(p.clusters[0].center_lab.a, 0.0);
  EXPECT_EQ(p.clusters[0].center_lab.b, 0.0);
  EXPECT_NEAR(p.clusters[0].center_lab.L, rgb_to_lab(Rgb8{200, 40, 40}).L, 1e-9);
  // Filtered pixels still count in the denominator.
  EXPECT_NEAR(p.clusters[0].pixel_fraction, 1.0 / 3.0, 1e-9);
}

TEST(Palette, CheckerboardIsAllFiltered) {
  ImageBuffer board(32, 32);
  for (int y = 0; y < 32; ++y) {
    for (int x = 0; x < 32; ++x) board.at(x, y) = ((x + y) % 2) ? kWhite : kBlack;
  }
  try {
    extract_dominant(board, ClusterMode::Value, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::AllPixelsFiltered);
  }
  EXPECT_NO_THROW(extract_dominant(board, ClusterMode::Color, {}));
}

TEST(Palette, FewerDistinctColorsThanK) {
  const ImageBuffer img = testkit::banded_image(40, 10, {{10, 200, 10}, {200, 10, 10}}, {1, 3});
  PaletteOptions opts;
  opts.k = 5;
  const Palette p = extract_dominant(img, ClusterMode::Color, opts);
  EXPECT_EQ(p.clusters.size(), 2u);
  EXPECT_EQ(p.k_requested, 5);
  EXPECT_NEAR(p.clusters[0].pixel_fraction, 0.75, 1e-9);
}

TEST(Palette, SubsamplingKeepsShares) {
  const ImageBuffer img = testkit::banded_image(1500, 700, kThree, kWeights);
  PaletteOptions opts;
  opts.k = 3;
  const Palette p = extract_dominant(img, ClusterMode::Color, opts);
  for (std::size_t i = 0; i < kThree.size(); ++i) {
    EXPECT_NEAR(nearest_cluster(p, rgb_to_lab(kThree[i])).pixel_fraction, kWeights[i], 0.01);
  }
}

TEST(Palette, RegionsFollowBands) {
  const ImageBuffer img = testkit::banded_image(100, 40, kThree, {1, 1, 2});
  PaletteOptions opts;
  opts.k = 3;
  const Palette p = extract_dominant(img, ClusterMode::Color, opts);
  const DominantCluster& blue = nearest_cluster(p, rgb_to_lab(kThree[2]));
  EXPECT_FALSE(blue.region_fallback);
  ASSERT_EQ(blue.region_contours.size(), 1u);
  EXPECT_NEAR(blue.bbox.x_min, 50.5 / 100.0, 1e-12);
  EXPECT_NEAR(blue.bbox.x_max, 99.5 / 100.0, 1e-12);
}

TEST(Palette, RegionFallbackWhenCenterIsBetweenColors) {
  // Two colors far apart forced into one cluster: no pixel lies near the mean.
  const ImageBuffer img = testkit::banded_image(20, 10, {{0, 0, 255}, {255, 255, 0}}, {1, 1});
  PaletteOptions opts;
  opts.k = 1;
  const Palette p = extract_dominant(img, ClusterMode::Color, opts);
  ASSERT_EQ(p.clusters.size(), 1u);
  EXPECT_TRUE(p.clusters[0].region_fallback);
  EXPECT_DOUBLE_EQ(p.clusters[0].bbox.area(), (19.0 / 20.0) * (9.0 / 10.0));
}

TEST(Palette, KMeansObjectiveNeverIncreases) {
  testkit::Rng rng(3);
  std::uniform_real_distribution<double> u(-50, 50);
  std::vector<std::array<double, 3>> pts(400);
  std::vector<double> w(400);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    pts[i] = {u(rng), u(rng), u(rng)};
    w[i] = 1.0 + (i % 7);
  }
  const KMeansResult r = weighted_kmeans(pts, w, 6, 1, 100, 1e-4);
  ASSERT_GE(r.objective_history.size(), 2u);
  for (std::size_t i = 1; i < r.objective_history.size(); ++i) {
    EXPECT_LE(r.objective_history[i], r.objective_history[i - 1] + 1e-9);
  }
  double total = 0.0;
  for (double x : r.weights) total += x;
  EXPECT_NEAR(total, std::accumulate(w.begin(), w.end(), 0.0), 1e-9);
}

TEST(Palette, KMeansSeparatesObviousGroups) {
  const std::vector<std::array<double, 3>> pts{{0, 0, 0}, {1, 0, 0}, {100, 0, 0}, {101, 0, 0}};
  const std::vector<double> w{1, 1, 1, 3};
  const KMeansResult r = weighted_kmeans(pts, w, 2, 0, 100, 1e-4);
  ASSERT_EQ(r.centers.size(), 2u);
  EXPECT_EQ(r.labels[0], r.labels[1]);
  EXPECT_EQ(r.labels[2], r.labels[3]);
  EXPECT_NE(r.labels[0], r.labels[2]);
  const auto hi = static_cast<std::size_t>(r.labels[2]);
  EXPECT_NEAR(r.centers[hi][0], 100.75, 1e-9);
}

TEST(Palette, RegionMaskAndEmptyRegion) {
  const ImageBuffer img = testkit::banded_image(30, 10, {{0, 0, 0}, {255, 255, 255}}, {1, 2});
  DominantCluster c;
  c.mode = ClusterMode::Value;
  c.center_lab = {100, 0, 0};
  const RegionMask r = region_mask_for(img, c, 5.0);
  EXPECT_EQ(r.mask.count(), 200u);
  c.center_lab = {50, 0, 0};
  EXPECT_THROW(region_mask_for(img, c, 5.0), Error);
}

TEST(Palette, IsolationKeepsHoveredColor) {
  const ImageBuffer img = testkit::banded_image(90, 30, kThree, {1, 1, 1});
  PaletteOptions opts;
  opts.k = 3;
  const Palette p = extract_dominant(img, ClusterMode::Color, opts);
  const ImageBuffer out = isolate_color_preview(img, p, 45, 10);
  for (int x = 0; x < 90; ++x) {
    const Rgb8 want = (x >= 30 && x < 60) ? kThree[1] : kWhite;
    EXPECT_EQ(out.at(x, 5), want) << x;
  }
}

TEST(Palette, IsolationErrors) {
  const ImageBuffer img = testkit::banded_image(10, 10, kThree, {1, 1, 1});
  const Palette color = extract_dominant(img, ClusterMode::Color, {});
  const Palette value = extract_dominant(img, ClusterMode::Value, {});
  auto code_of = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::NotFound;
  };
  EXPECT_EQ(code_of([&] { isolate_color_preview(img, color, 10, 0); }), ErrorCode::OutOfBounds);
  EXPECT_EQ(code_of([&] { isolate_color_preview(img, color, -1, 3); }), ErrorCode::OutOfBounds);
  EXPECT_EQ(code_of([&] { isolate_color_preview(img, value, 1, 1); }), ErrorCode::ModeMismatch);
  Palette empty;
  empty.mode = ClusterMode::Color;
  EXPECT_EQ(code_of([&] { isolate_color_preview(img, empty, 1, 1); }), ErrorCode::EmptyPalette);
}
