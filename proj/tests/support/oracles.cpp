#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace atelier::testkit {

namespace {

double spatial_iou(const BoundingBox& a, const BoundingBox& b) {
  const double ix = std::max(0.0, std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min));
  const double iy = std::max(0.0, std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min));
  const double inter = ix * iy;
  const double uni = a.area() + b.area() - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

double score(const DominantCluster& c, const DominantCluster& r) {
  const double dl = (c.center_lab.L - r.center_lab.L) / 100.0;
  const double da = ((c.center_lab.a + 128.0) - (r.center_lab.a + 128.0)) / 256.0;
  const double db = ((c.center_lab.b + 128.0) - (r.center_lab.b + 128.0)) / 256.0;
  const double s_val = 1.0 - std::sqrt(dl * dl + da * da + db * db) / 3.0;
  return 0.4 * s_val + 0.6 * spatial_iou(c.bbox, r.bbox);
}

int red(const ImageBuffer& img, int x, int y) {
  x = std::clamp(x, 0, img.width() - 1);
  y = std::clamp(y, 0, img.height() - 1);
  return img.at(x, y).r;
}

}  // namespace

std::vector<std::size_t> exhaustive_match(const Palette& canvas, const Palette& reference) {
  std::vector<std::size_t> out;
  for (const auto& r : reference.clusters) {
    std::vector<std::size_t> order(canvas.clusters.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      const double sa = score(canvas.clusters[a], r);
      const double sb = score(canvas.clusters[b], r);
      if (sa != sb) return sa > sb;
      return canvas.clusters[a].pixel_fraction > canvas.clusters[b].pixel_fraction;
    });
    out.push_back(order.front());
  }
  return out;
}

std::vector<double> naive_gaussian(const ImageBuffer& gray, double sigma) {
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> out(gray.size());
  for (int y = 0; y < gray.height(); ++y) {
    for (int x = 0; x < gray.width(); ++x) {
      double acc = 0.0, norm = 0.0;
      for (int dy = -radius; dy <= radius; ++dy) {
        for (int dx = -radius; dx <= radius; ++dx) {
          const double w = std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
          acc += w * red(gray, x + dx, y + dy);
          norm += w;
        }
      }
      out[static_cast<std::size_t>(y) * gray.width() + x] = acc / norm;
    }
  }
  return out;
}

std::vector<int> naive_median(const ImageBuffer& gray, int window) {
  const int r = window / 2;
  std::vector<int> out(gray.size());
  std::vector<int> vals;
  for (int y = 0; y < gray.height(); ++y) {
    for (int x = 0; x < gray.width(); ++x) {
      vals.clear();
      for (int dy = -r; dy <= r; ++dy) {
        for (int dx = -r; dx <= r; ++dx) vals.push_back(red(gray, x + dx, y + dy));
      }
      std::sort(vals.begin(), vals.end());
      out[static_cast<std::size_t>(y) * gray.width() + x] = vals[vals.size() / 2];
    }
  }
  return out;
}

double laplacian_variance(const ImageBuffer& gray) {
  std::vector<double> lap;
  for (int y = 1; y + 1 < gray.height(); ++y) {
    for (int x = 1; x + 1 < gray.width(); ++x) {
      lap.push_back(red(gray, x - 1, y) + red(gray, x + 1, y) + red(gray, x, y - 1) +
                    red(gray, x, y + 1) - 4.0 * red(gray, x, y));
    }
  }
  double mean = 0.0;
  for (double v : lap) mean += v;
  mean /= static_cast<double>(lap.size());
  double var = 0.0;
  for (double v : lap) var += (v - mean) * (v - mean);
  return var / static_cast<double>(lap.size());
}

HsvColor textbook_hsv(Rgb8 c) {
  const double r = c.r / 255.0, g = c.g / 255.0, b = c.b / 255.0;
  const double mx = std::max({r, g, b});
  const double mn = std::min({r, g, b});
  const double d = mx - mn;
  double h = 0.0;
  if (d > 0.0) {
    if (mx == r) {
      h = 60.0 * std::fmod((g - b) / d + 6.0, 6.0);
    } else if (mx == g) {
      h = 60.0 * ((b - r) / d + 2.0);
    } else {
      h = 60.0 * ((r - g) / d + 4.0);
    }
  }
  return {h, mx > 0.0 ? d / mx : 0.0, mx};
}

std::vector<NormPoint> stack_rdp(const std::vector<NormPoint>& contour, double epsilon) {
  const std::size_t n = contour.size();
  auto seg_dist = [](NormPoint p, NormPoint a, NormPoint b) {
    const double vx = b.x - a.x, vy = b.y - a.y;
    const double l2 = vx * vx + vy * vy;
    double t = l2 > 0.0 ? ((p.x - a.x) * vx + (p.y - a.y) * vy) / l2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return std::hypot(p.x - (a.x + t * vx), p.y - (a.y + t * vy));
  };
  std::size_t far = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (std::hypot(contour[i].x - contour[0].x, contour[i].y - contour[0].y) >
        std::hypot(contour[far].x - contour[0].x, contour[far].y - contour[0].y)) {
      far = i;
    }
  }
  std::vector<bool> keep(n, false);
  keep[0] = keep[far] = true;
  // Ranges are [lo, hi] in a virtual index space where n aliases vertex 0.
  std::vector<std::pair<std::size_t, std::size_t>> stack{{0, far}, {far, n}};
  while (!stack.empty()) {
    auto [lo, hi] = stack.back();
    stack.pop_back();
    if (hi <= lo + 1) continue;
    const NormPoint a = contour[lo % n], b = contour[hi % n];
    std::size_t best = lo;
    double best_d = -1.0;
    for (std::size_t i = lo + 1; i < hi; ++i) {
      const double d = seg_dist(contour[i], a, b);
      if (d > best_d) {
        best_d = d;
        best = i;
      }
    }
    if (best_d > epsilon) {
      keep[best] = true;
      stack.push_back({lo, best});
      stack.push_back({best, hi});
    }
  }
  std::vector<NormPoint> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (keep[i]) out.push_back(contour[i]);
  }
  return out;
}

std::vector<std::pair<int, int>> boundary_pixels(const Mask& mask) {
  std::vector<std::pair<int, int>> out;
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (!mask.get(x, y)) continue;
      if (!mask.get_or_false(x - 1, y) || !mask.get_or_false(x + 1, y) ||
          !mask.get_or_false(x, y - 1) || !mask.get_or_false(x, y + 1)) {
        out.push_back({x, y});
      }
    }
  }
  return out;
}

}  // namespace atelier::testkit
