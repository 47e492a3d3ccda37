#include <gtest/gtest.h>

#include <cmath>

#include "atelier/color.hpp"
#include "atelier/error.hpp"
#include "atelier/matching.hpp"
#include "support/oracles.hpp"
#include "support/synth.hpp"

using namespace atelier;

namespace {

DominantCluster cluster(LabColor lab, BoundingBox box, ClusterMode mode = ClusterMode::Value,
                        double fraction = 0.2) {
  DominantCluster c;
  c.center_lab = lab;
  c.bbox = box;
  c.mode = mode;
  c.pixel_fraction = fraction;
  return c;
}

DominantCluster hsv_cluster(double h, double s, double v) {
  return cluster(rgb_to_lab(hsv_to_rgbf({h, s, v})), {0, 0, 1, 1}, ClusterMode::Color);
}

MatchPair pair_of(DominantCluster canvas, DominantCluster reference) {
  MatchPair p;
  p.canvas_cluster = std::move(canvas);
  p.reference_cluster = std::move(reference);
  return p;
}

const BoundingBox kBox{0.1, 0.1, 0.6, 0.6};

}  // namespace

TEST(Matching, SpotValues) {
  const DominantCluster a = cluster({50, 0, 0}, kBox);
  EXPECT_EQ(combined_score(a, a).s_total, 1.0);
  const DominantCluster far = cluster({50, 0, 0}, {0.7, 0.7, 0.9, 0.9});
  EXPECT_NEAR(combined_score(a, far).s_total, 0.4, 1e-12);
  const DominantCluster black = cluster({0, 0, 0}, kBox);
  const DominantCluster white = cluster({100, 0, 0}, kBox);
  EXPECT_NEAR(combined_score(black, white).s_total, 0.4 * (2.0 / 3.0) + 0.6, 1e-9);
  EXPECT_NEAR(value_similarity({0, -128, -128}, {100, 128, 128}), 1.0 - std::sqrt(3.0) / 3.0, 1e-12);
}

TEST(Matching, ZeroAreaBoxesFlagged) {
  const DominantCluster a = cluster({50, 0, 0}, {0.2, 0.2, 0.2, 0.2});
  const SimilarityBreakdown s = combined_score(a, a);
  EXPECT_TRUE(s.spt_zero_area);
  EXPECT_DOUBLE_EQ(s.s_total, 0.4);
}

TEST(Matching, ModeAndEmptyErrors) {
  const DominantCluster v = cluster({50, 0, 0}, kBox, ClusterMode::Value);
  const DominantCluster c = cluster({50, 0, 0}, kBox, ClusterMode::Color);
  EXPECT_THROW(combined_score(v, c), Error);
  Palette pv, pc, empty;
  pv.clusters = {v};
  pc.clusters = {c};
  pc.mode = ClusterMode::Color;
  try {
    match_palettes(pv, pc);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ModeMismatch);
  }
  try {
    match_palettes(empty, pv);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyPalette);
  }
}

TEST(Matching, EqualsExhaustiveSearch) {
  testkit::Rng rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    const ClusterMode mode = trial % 2 ? ClusterMode::Color : ClusterMode::Value;
    const Palette canvas = testkit::random_palette(rng, mode, 6);
    const Palette reference = testkit::random_palette(rng, mode, 6);
    const auto pairs = match_palettes(canvas, reference);
    const auto want = testkit::exhaustive_match(canvas, reference);
    ASSERT_EQ(pairs.size(), want.size());
    for (std::size_t r = 0; r < want.size(); ++r) {
      EXPECT_EQ(pairs[r].reference_index, r);
      EXPECT_EQ(pairs[r].canvas_index, want[r]) << "trial " << trial << " ref " << r;
    }
  }
}

TEST(Matching, TieBreaksOnShareThenIndex) {
  Palette canvas, reference;
  canvas.clusters = {cluster({40, 0, 0}, kBox, ClusterMode::Value, 0.1),
                     cluster({60, 0, 0}, kBox, ClusterMode::Value, 0.3),
                     cluster({60, 0, 0}, kBox, ClusterMode::Value, 0.3)};
  reference.clusters = {cluster({50, 0, 0}, kBox)};
  EXPECT_EQ(match_palettes(canvas, reference)[0].canvas_index, 1u);
}

TEST(Matching, HueCategories) {
  EXPECT_EQ(hue_category(0).name, "red");
  EXPECT_EQ(hue_category(29.999).name, "red");
  EXPECT_EQ(hue_category(30).name, "yellow");
  EXPECT_EQ(hue_category(150).name, "cyan");
  EXPECT_EQ(hue_category(329.999).name, "magenta");
  EXPECT_EQ(hue_category(330).name, "red");
  EXPECT_EQ(hue_category(-10).name, "red");
  EXPECT_EQ(hue_category(240).center, 240.0);
}

TEST(Matching, HueDeltaTakesShortArc) {
  EXPECT_DOUBLE_EQ(hue_delta(10, 350), 20.0);
  EXPECT_DOUBLE_EQ(hue_delta(350, 10), -20.0);
  EXPECT_DOUBLE_EQ(hue_delta(180, 0), 180.0);
  EXPECT_DOUBLE_EQ(hue_delta(0, 180), 180.0);
}

TEST(Matching, ValueFeedbackBoundaries) {
  const DominantCluster ref = cluster({50, 0, 0}, kBox);
  auto direction = [&](double canvas_l) {
    return render_value_feedback(pair_of(cluster({canvas_l, 0, 0}, kBox), ref)).direction;
  };
  EXPECT_EQ(direction(53.0), FeedbackDirection::Match);
  EXPECT_EQ(direction(47.0), FeedbackDirection::Match);
  EXPECT_EQ(direction(53.001), FeedbackDirection::Darken);
  EXPECT_EQ(direction(46.999), FeedbackDirection::Lighten);
  const FeedbackMessage m = render_value_feedback(pair_of(cluster({30, 0, 0}, kBox), ref));
  EXPECT_EQ(m.magnitude, 20.0);
  EXPECT_NE(m.text.find("lightening it by about 20"), std::string::npos);
}

TEST(Matching, WarmerCoolerAntisymmetry) {
  for (auto [h1, h2] : {std::pair{40.0, 55.0}, {215.0, 230.0}, {100.0, 130.0}, {300.0, 320.0}}) {
    const DominantCluster a = hsv_cluster(h1, 0.6, 0.8);
    const DominantCluster b = hsv_cluster(h2, 0.6, 0.8);
    const FeedbackMessage ab = render_color_feedback(pair_of(a, b))[0];
    const FeedbackMessage ba = render_color_feedback(pair_of(b, a))[0];
    ASSERT_TRUE(ab.direction == FeedbackDirection::Warmer || ab.direction == FeedbackDirection::Cooler)
        << h1;
    EXPECT_NE(ab.direction, ba.direction);
    EXPECT_NEAR(ab.delta, -ba.delta, 1e-6);
  }
  // 40 is closer to the warm pole than 55.
  const auto msg = render_color_feedback(pair_of(hsv_cluster(55, 0.6, 0.8), hsv_cluster(40, 0.6, 0.8)));
  EXPECT_EQ(msg[0].direction, FeedbackDirection::Warmer);
}

TEST(Matching, CrossCategoryNamesReference) {
  const DominantCluster green = hsv_cluster(135, 0.7, 0.7);
  const DominantCluster cyan = hsv_cluster(185, 0.7, 0.7);
  const auto msgs = render_color_feedback(pair_of(green, cyan));
  ASSERT_EQ(msgs.size(), 2u);
  EXPECT_EQ(msgs[0].direction, FeedbackDirection::TowardCategory);
  EXPECT_EQ(msgs[0].category, "cyan");
  EXPECT_NE(msgs[0].text.find("should be more cyan in hue"), std::string::npos);
}

TEST(Matching, SaturationFeedback) {
  const auto dull = render_color_feedback(pair_of(hsv_cluster(200, 0.3, 0.8), hsv_cluster(200, 0.6, 0.8)));
  EXPECT_EQ(dull[0].direction, FeedbackDirection::Match);
  EXPECT_EQ(dull[1].direction, FeedbackDirection::MoreVibrant);
  EXPECT_NEAR(dull[1].delta, -30.0, 1e-6);
  const auto loud = render_color_feedback(pair_of(hsv_cluster(200, 0.62, 0.8), hsv_cluster(200, 0.6, 0.8)));
  EXPECT_EQ(loud[1].direction, FeedbackDirection::Match);
  const auto over = render_color_feedback(pair_of(hsv_cluster(200, 0.9, 0.8), hsv_cluster(200, 0.6, 0.8)));
  EXPECT_EQ(over[1].direction, FeedbackDirection::LessVibrant);
}

TEST(Matching, FeedbackRejectsWrongMode) {
  const MatchPair value_pair = pair_of(cluster({50, 0, 0}, kBox), cluster({50, 0, 0}, kBox));
  EXPECT_THROW(render_color_feedback(value_pair), Error);
  const MatchPair color_pair = pair_of(hsv_cluster(10, 1, 1), hsv_cluster(10, 1, 1));
  EXPECT_THROW(render_value_feedback(color_pair), Error);
}

TEST(Matching, ComparePalettesAttachesFeedback) {
  Palette canvas, reference;
  canvas.mode = reference.mode = ClusterMode::Color;
  canvas.clusters = {hsv_cluster(10, 0.5, 0.5)};
  reference.clusters = {hsv_cluster(10, 0.5, 0.5), hsv_cluster(250, 0.5, 0.5)};
  const auto pairs = compare_palettes(canvas, reference);
  ASSERT_EQ(pairs.size(), 2u);
  EXPECT_EQ(pairs[0].feedback.size(), 2u);
  EXPECT_EQ(pairs[0].feedback[0].direction, FeedbackDirection::Match);
  EXPECT_EQ(pairs[1].canvas_index, 0u);
}
