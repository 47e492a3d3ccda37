#include "atelier/composition.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <string>

#include "atelier/error.hpp"

namespace atelier {

namespace {

// Unbiased bounded draw; avoids std::uniform_int_distribution so sequences
// are identical across standard library implementations.
std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
  const std::uint64_t bound = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = std::mt19937_64::max() - std::mt19937_64::max() % bound;
  std::uint64_t v = rng();
  while (v >= limit) v = rng();
  return static_cast<std::size_t>(v % bound);
}

// Active points grouped by polygon, in ascending input order within a group.
struct ActiveSet {
  std::vector<std::size_t> order;  // all active indices, ascending
  std::vector<std::vector<std::size_t>> groups;
  std::vector<int> group_polygon;
};

ActiveSet build_active(std::span<const SampledPoint> points, const std::vector<char>& removed) {
  ActiveSet s;
  std::map<int, std::size_t> group_of;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (removed[i]) continue;
    s.order.push_back(i);
    const int poly = points[i].polygon_id;
    auto it = group_of.find(poly);
    if (it == group_of.end()) {
      it = group_of.emplace(poly, s.groups.size()).first;
      s.groups.emplace_back();
      s.group_polygon.push_back(poly);
    }
    s.groups[it->second].push_back(i);
  }
  return s;
}

struct Candidate {
  std::size_t inliers = 0;
  double distance_sum = 0.0;
  std::size_t draw = 0;
  LineModel model;
};

// True when `a` should replace `b` as the round's best candidate.
bool better(const Candidate& a, const Candidate& b) {
  if (a.inliers != b.inliers) return a.inliers > b.inliers;
  if (a.inliers == 0) return false;
  const double ma = a.distance_sum / static_cast<double>(a.inliers);
  const double mb = b.distance_sum / static_cast<double>(b.inliers);
  if (ma != mb) return ma < mb;
  return a.draw < b.draw;
}

std::size_t required_inliers(double theta_inl, std::size_t total) {
  // Guard against 0.1 * 30 evaluating to 3.0000000000000004.
  const double raw = theta_inl * static_cast<double>(total);
  return static_cast<std::size_t>(std::ceil(raw - 1e-9 * std::max(1.0, raw)));
}

}  // namespace

double LineModel::distance(NormPoint p) const noexcept { return std::fabs(signed_distance(p)); }

std::optional<LineModel> LineModel::through(NormPoint a, NormPoint b) noexcept {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double len = std::hypot(dx, dy);
  if (!(len > 0.0)) return std::nullopt;
  LineModel m{-dy / len, dx / len, 0.0};
  m.offset = m.nx * a.x + m.ny * a.y;
  const bool flip = m.offset < 0.0 || (m.offset == 0.0 && (m.nx < 0.0 || (m.nx == 0.0 && m.ny < 0.0)));
  if (flip) {
    m.nx = -m.nx;
    m.ny = -m.ny;
    m.offset = -m.offset;
  }
  // Adding +0.0 turns -0.0 into +0.0 so equal lines serialize identically.
  m.nx += 0.0;
  m.ny += 0.0;
  m.offset += 0.0;
  return m;
}

void RansacConfig::validate() const {
  if (!(theta_dis > 0.0 && theta_dis < 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "theta_dis must lie in (0, 1)");
  }
  if (!(theta_inl > 0.0 && theta_inl <= 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "theta_inl must lie in (0, 1]");
  }
  if (iterations < 1) throw Error(ErrorCode::InvalidConfig, "iterations must be >= 1");
  if (max_lines < 0) throw Error(ErrorCode::InvalidConfig, "max_lines must be >= 0");
}

std::vector<CompositionLine> fit_composition_lines(std::span<const SampledPoint> points,
                                                   const RansacConfig& cfg) {
  cfg.validate();
  if (points.empty()) throw Error(ErrorCode::NoPoints, "no sampled points to fit");

  const std::size_t total = points.size();
  const std::size_t needed = required_inliers(cfg.theta_inl, total);
  std::mt19937_64 rng(cfg.seed);
  std::vector<char> removed(total, 0);
  std::vector<CompositionLine> lines;

  while (static_cast<int>(lines.size()) < cfg.max_lines) {
    const ActiveSet active = build_active(points, removed);
    if (active.groups.size() < 2) break;

    // Draw the whole round's seed pairs first; evaluation order then cannot
    // affect which candidate wins.
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    pairs.reserve(static_cast<std::size_t>(cfg.iterations));
    for (int it = 0; it < cfg.iterations; ++it) {
      const std::size_t first = active.order[uniform_index(rng, active.order.size())];
      const int first_poly = points[first].polygon_id;
      std::size_t other_count = 0;
      for (std::size_t g = 0; g < active.groups.size(); ++g) {
        if (active.group_polygon[g] != first_poly) other_count += active.groups[g].size();
      }
      std::size_t pick = uniform_index(rng, other_count);
      std::size_t second = first;
      for (std::size_t g = 0; g < active.groups.size(); ++g) {
        if (active.group_polygon[g] == first_poly) continue;
        if (pick < active.groups[g].size()) {
          second = active.groups[g][pick];
          break;
        }
        pick -= active.groups[g].size();
      }
      pairs.emplace_back(first, second);
    }

    std::optional<Candidate> best;
    for (std::size_t draw = 0; draw < pairs.size(); ++draw) {
      const auto model = LineModel::through(points[pairs[draw].first].point,
                                            points[pairs[draw].second].point);
      if (!model) continue;
      Candidate c;
      c.draw = draw;
      c.model = *model;
      for (std::size_t idx : active.order) {
        const double d = model->distance(points[idx].point);
        if (d <= cfg.theta_dis) {
          ++c.inliers;
          c.distance_sum += d;
        }
      }
      if (!best || better(c, *best)) best = c;
    }
    if (!best || best->inliers < needed || best->inliers == 0) break;

    CompositionLine line;
    line.model = best->model;
    line.segment = clip_to_unit_square(best->model);
    line.rank = static_cast<int>(lines.size());
    for (std::size_t idx : active.order) {
      if (best->model.distance(points[idx].point) <= cfg.theta_dis) {
        line.inlier_indices.push_back(idx);
        line.supporting_polygons.push_back(points[idx].polygon_id);
      }
    }
    std::sort(line.supporting_polygons.begin(), line.supporting_polygons.end());
    line.supporting_polygons.erase(
        std::unique(line.supporting_polygons.begin(), line.supporting_polygons.end()),
        line.supporting_polygons.end());
    if (line.supporting_polygons.size() < 2) break;

    line.inliers = line.inlier_indices.size();
    line.inlier_fraction = static_cast<double>(line.inliers) / static_cast<double>(total);
    line.mean_distance = best->distance_sum / static_cast<double>(best->inliers);
    for (std::size_t idx : line.inlier_indices) removed[idx] = 1;
    lines.push_back(std::move(line));
  }
  return lines;
}

std::vector<CompositionLine> top_k(std::span<const CompositionLine> lines, std::size_t k) {
  const std::size_t n = std::min(k, lines.size());
  return {lines.begin(), lines.begin() + static_cast<std::ptrdiff_t>(n)};
}

std::optional<LineSegment> clip_to_unit_square(const LineModel& m) noexcept {
  constexpr double kTol = 1e-12;
  std::vector<NormPoint> hits;
  auto consider = [&](double x, double y) {
    if (x < -kTol || x > 1.0 + kTol || y < -kTol || y > 1.0 + kTol) return;
    const NormPoint p{std::clamp(x, 0.0, 1.0), std::clamp(y, 0.0, 1.0)};
    for (const NormPoint& q : hits) {
      if (std::fabs(q.x - p.x) < 1e-9 && std::fabs(q.y - p.y) < 1e-9) return;
    }
    hits.push_back(p);
  };
  if (std::fabs(m.ny) > kTol) {
    consider(0.0, m.offset / m.ny);
    consider(1.0, (m.offset - m.nx) / m.ny);
  }
  if (std::fabs(m.nx) > kTol) {
    consider(m.offset / m.nx, 0.0);
    consider((m.offset - m.ny) / m.nx, 1.0);
  }
  if (hits.size() < 2) return std::nullopt;
  // More than two hits only happens through corners; keep the longest chord.
  std::size_t bi = 0, bj = 1;
  double best = -1.0;
  for (std::size_t i = 0; i < hits.size(); ++i) {
    for (std::size_t j = i + 1; j < hits.size(); ++j) {
      const double d = distance(hits[i], hits[j]);
      if (d > best) {
        best = d;
        bi = i;
        bj = j;
      }
    }
  }
  NormPoint a = hits[bi];
  NormPoint b = hits[bj];
  if (b.x < a.x || (b.x == a.x && b.y < a.y)) std::swap(a, b);
  return LineSegment{a, b};
}

}  // namespace atelier
