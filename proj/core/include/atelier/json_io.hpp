#pragma once

#include <nlohmann/json.hpp>

#include "atelier/composition.hpp"
#include "atelier/filters.hpp"
#include "atelier/geometry.hpp"
#include "atelier/matching.hpp"
#include "atelier/palette.hpp"

namespace atelier {

using Json = nlohmann::json;

std::string hex_color(Rgb8 c);

Json to_json(NormPoint p);
Json to_json(const BoundingBox& b);
Json to_json(const DenseContour& c);
Json to_json(const PolygonContour& p);
Json to_json(const GridOverlay& g);
Json to_json(const CompositionLine& line);
Json to_json(const RansacConfig& cfg);
Json to_json(const BlurSpec& spec);
Json to_json(const LabColor& lab);
/// Includes region contours only when `with_regions` is set.
Json to_json(const DominantCluster& c, bool with_regions = false);
Json to_json(const Palette& p);
Json to_json(const SimilarityBreakdown& s);
Json to_json(const FeedbackMessage& m);
Json to_json(const MatchPair& p, bool with_regions = true);
Json to_json(const FeedbackTolerances& t);

Json lines_to_json(std::span<const CompositionLine> lines);

/// [x0,y0,x1,y1] -> box; throws Error(BadRequest) on malformed input.
BoundingBox box_from_json(const Json& j);
/// [[x,y], ...]
std::vector<NormPoint> points_from_json(const Json& j);
/// Inverses of the to_json overloads above; Error(BadRequest) on bad shape.
PolygonContour polygon_from_json(const Json& j);
CompositionLine line_from_json(const Json& j);

RansacConfig ransac_from_json(const Json& j, RansacConfig base = {});
FeedbackTolerances tolerances_from_json(const Json& j, FeedbackTolerances base = {});

}  // namespace atelier
