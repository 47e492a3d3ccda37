#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "atelier/palette.hpp"

namespace atelier {

inline constexpr double kValueWeight = 0.4;
inline constexpr double kSpatialWeight = 0.6;

struct SimilarityBreakdown {
  double s_val = 0.0;
  double s_spt = 0.0;
  double s_total = 0.0;
  double w_val = kValueWeight;
  double w_spt = kSpatialWeight;
  /// Both boxes had zero area, so the spatial term fell back to 0.
  bool spt_zero_area = false;
};

enum class FeedbackDimension { Value, Hue, Saturation };

enum class FeedbackDirection {
  Match,
  Lighten,
  Darken,
  Warmer,
  Cooler,
  TowardCategory,
  LessVibrant,
  MoreVibrant,
};

std::string_view to_string(FeedbackDimension d) noexcept;
std::string_view to_string(FeedbackDirection d) noexcept;

struct FeedbackMessage {
  FeedbackDimension dimension = FeedbackDimension::Value;
  FeedbackDirection direction = FeedbackDirection::Match;
  /// Target hue category for TowardCategory.
  std::string category;
  /// Signed canvas-minus-reference difference in the dimension's units
  /// (L* units, degrees along the shorter arc, saturation points).
  double delta = 0.0;
  /// |delta| rounded to a whole unit; this is what the text quotes.
  double magnitude = 0.0;
  std::string text;
};

struct HueCategory {
  std::string_view name;
  double center = 0.0;
};

/// Six 60-degree sectors centered on 0, 60, ..., 300; lower bound inclusive.
HueCategory hue_category(double hue_deg) noexcept;

/// Shortest signed arc from `to` to `from`, in (-180, 180].
double hue_delta(double from, double to) noexcept;

inline constexpr double kWarmPole = 30.0;
inline constexpr double kCoolPole = 210.0;

struct FeedbackTolerances {
  double value = 3.0;       // L* units
  double hue = 3.0;         // degrees
  double saturation = 3.0;  // percentage points
};

struct MatchPair {
  DominantCluster canvas_cluster;
  DominantCluster reference_cluster;
  std::size_t canvas_index = 0;
  std::size_t reference_index = 0;
  SimilarityBreakdown score;
  std::vector<FeedbackMessage> feedback;
};

/// 1 - |a' - b'| / 3 with channels scaled to (L/100, (a+128)/256, (b+128)/256).
double value_similarity(const LabColor& a, const LabColor& b) noexcept;

/// Throws Error(ModeMismatch) if the clusters come from different modes.
SimilarityBreakdown combined_score(const DominantCluster& canvas, const DominantCluster& reference);

/// One pair per reference cluster, in reference order: the canvas cluster with
/// the highest total score (ties: larger canvas pixel share, then lower
/// index). Canvas clusters may be reused. Feedback is left empty.
std::vector<MatchPair> match_palettes(const Palette& canvas, const Palette& reference);

FeedbackMessage render_value_feedback(const MatchPair& pair, const FeedbackTolerances& tol = {});

/// Hue message followed by saturation message.
std::vector<FeedbackMessage> render_color_feedback(const MatchPair& pair,
                                                   const FeedbackTolerances& tol = {});

/// match_palettes plus the mode-appropriate feedback on every pair.
std::vector<MatchPair> compare_palettes(const Palette& canvas, const Palette& reference,
                                        const FeedbackTolerances& tol = {});

}  // namespace atelier
