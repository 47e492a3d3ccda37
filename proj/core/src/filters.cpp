#include "atelier/filters.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <vector>

#include "atelier/color.hpp"
#include "atelier/error.hpp"

namespace atelier {

namespace {

int clamp_index(int i, int n) noexcept { return std::clamp(i, 0, n - 1); }

std::uint8_t quantize(double v) noexcept {
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
}

ImageBuffer gaussian_blur(const ImageBuffer& img, double sigma) {
  const int window = gaussian_window(sigma);
  const int radius = window / 2;
  std::vector<double> weights(static_cast<std::size_t>(window));
  double total = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    const double w = std::exp(-(i * i) / (2.0 * sigma * sigma));
    weights[static_cast<std::size_t>(i + radius)] = w;
    total += w;
  }
  for (double& w : weights) w /= total;

  const int width = img.width();
  const int height = img.height();
  const std::size_t n = img.size();
  std::vector<std::array<double, 3>> horizontal(n);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      std::array<double, 3> acc{};
      for (int k = -radius; k <= radius; ++k) {
        const Rgb8 p = img.at(clamp_index(x + k, width), y);
        const double w = weights[static_cast<std::size_t>(k + radius)];
        acc[0] += w * p.r;
        acc[1] += w * p.g;
        acc[2] += w * p.b;
      }
      horizontal[static_cast<std::size_t>(y) * width + x] = acc;
    }
  }

  ImageBuffer out(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      std::array<double, 3> acc{};
      for (int k = -radius; k <= radius; ++k) {
        const auto& p = horizontal[static_cast<std::size_t>(clamp_index(y + k, height)) * width + x];
        const double w = weights[static_cast<std::size_t>(k + radius)];
        acc[0] += w * p[0];
        acc[1] += w * p[1];
        acc[2] += w * p[2];
      }
      out.at(x, y) = {quantize(acc[0]), quantize(acc[1]), quantize(acc[2])};
    }
  }
  return out;
}

// Sliding-histogram median (one histogram per channel), clamp-to-edge.
ImageBuffer median_blur(const ImageBuffer& img, int window) {
  const int radius = window / 2;
  const int width = img.width();
  const int height = img.height();
  const int half = (window * window) / 2;
  ImageBuffer out(width, height);

  auto channel = [](const Rgb8& p, int c) -> int { return c == 0 ? p.r : (c == 1 ? p.g : p.b); };

  for (int y = 0; y < height; ++y) {
    std::array<std::array<int, 256>, 3> hist{};
    auto add_column = [&](int cx, int delta) {
      const int sx = clamp_index(cx, width);
      for (int dy = -radius; dy <= radius; ++dy) {
        const Rgb8& p = img.at(sx, clamp_index(y + dy, height));
        for (int c = 0; c < 3; ++c) hist[c][static_cast<std::size_t>(channel(p, c))] += delta;
      }
    };
    for (int dx = -radius; dx <= radius; ++dx) add_column(dx, +1);

    for (int x = 0; x < width; ++x) {
      if (x > 0) {
        add_column(x - radius - 1, -1);
        add_column(x + radius, +1);
      }
      std::array<std::uint8_t, 3> med{};
      for (int c = 0; c < 3; ++c) {
        int seen = 0;
        for (int v = 0; v < 256; ++v) {
          seen += hist[c][static_cast<std::size_t>(v)];
          if (seen > half) {
            med[static_cast<std::size_t>(c)] = static_cast<std::uint8_t>(v);
            break;
          }
        }
      }
      out.at(x, y) = {med[0], med[1], med[2]};
    }
  }
  return out;
}

ImageBuffer bilateral_blur(const ImageBuffer& img, int window, double spatial_sigma,
                           double range_sigma) {
  const int radius = window / 2;
  const int width = img.width();
  const int height = img.height();

  std::vector<double> spatial(static_cast<std::size_t>(window * window));
  for (int dy = -radius; dy <= radius; ++dy) {
    for (int dx = -radius; dx <= radius; ++dx) {
      spatial[static_cast<std::size_t>((dy + radius) * window + dx + radius)] =
          std::exp(-(dx * dx + dy * dy) / (2.0 * spatial_sigma * spatial_sigma));
    }
  }
  // Range weight factors per channel: exp(-d^2/2s^2) is a product over
  // channels of the squared Euclidean color distance.
  std::array<double, 256> range{};
  for (int d = 0; d < 256; ++d) {
    range[static_cast<std::size_t>(d)] = std::exp(-(d * d) / (2.0 * range_sigma * range_sigma));
  }

  ImageBuffer out(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const Rgb8 c = img.at(x, y);
      double acc_r = 0, acc_g = 0, acc_b = 0, total = 0;
      for (int dy = -radius; dy <= radius; ++dy) {
        const int sy = clamp_index(y + dy, height);
        for (int dx = -radius; dx <= radius; ++dx) {
          const Rgb8 p = img.at(clamp_index(x + dx, width), sy);
          const double w = spatial[static_cast<std::size_t>((dy + radius) * window + dx + radius)] *
                           range[static_cast<std::size_t>(std::abs(p.r - c.r))] *
                           range[static_cast<std::size_t>(std::abs(p.g - c.g))] *
                           range[static_cast<std::size_t>(std::abs(p.b - c.b))];
          acc_r += w * p.r;
          acc_g += w * p.g;
          acc_b += w * p.b;
          total += w;
        }
      }
      out.at(x, y) = {quantize(acc_r / total), quantize(acc_g / total), quantize(acc_b / total)};
    }
  }
  return out;
}

double sample_channel(const ImageBuffer& src, double u, double v, int c) {
  const int x0 = static_cast<int>(std::floor(u));
  const int y0 = static_cast<int>(std::floor(v));
  const double fx = u - x0;
  const double fy = v - y0;
  auto get = [&](int x, int y) -> double {
    const Rgb8 p = src.at(clamp_index(x, src.width()), clamp_index(y, src.height()));
    return c == 0 ? p.r : (c == 1 ? p.g : p.b);
  };
  const double top = get(x0, y0) * (1 - fx) + get(x0 + 1, y0) * fx;
  const double bottom = get(x0, y0 + 1) * (1 - fx) + get(x0 + 1, y0 + 1) * fx;
  return top * (1 - fy) + bottom * fy;
}

}  // namespace

std::string_view to_string(BlurFilter f) noexcept {
  switch (f) {
    case BlurFilter::Gaussian: return "gaussian";
    case BlurFilter::Bilateral: return "bilateral";
    case BlurFilter::Median: return "median";
  }
  return "gaussian";
}

std::optional<BlurFilter> parse_blur_filter(std::string_view name) noexcept {
  if (name == "gaussian") return BlurFilter::Gaussian;
  if (name == "bilateral") return BlurFilter::Bilateral;
  if (name == "median") return BlurFilter::Median;
  return std::nullopt;
}

void BlurSpec::validate() const {
  if (!(kernel_size >= kMinKernelSize && kernel_size <= kMaxKernelSize)) {
    std::ostringstream msg;
    msg << "kernel size " << kernel_size << " outside [" << kMinKernelSize << ", "
        << kMaxKernelSize << "]";
    throw Error(ErrorCode::InvalidKernel, msg.str());
  }
  if (!(range_sigma > 0.0)) {
    throw Error(ErrorCode::InvalidKernel, "bilateral range sigma must be positive");
  }
}

int gaussian_window(double sigma) noexcept {
  return 2 * static_cast<int>(std::ceil(3.0 * sigma)) + 1;
}

int odd_window(double kernel_size) noexcept {
  int w = static_cast<int>(std::ceil(2.0 * kernel_size + 1.0));
  if (w % 2 == 0) ++w;
  return w;
}

ImageBuffer to_value_image(const ImageBuffer& img) {
  ImageBuffer out(img.width(), img.height());
  auto src = img.pixels();
  auto dst = out.pixels();
  for (std::size_t i = 0; i < src.size(); ++i) {
    const std::uint8_t g = quantize(255.0 * rgb_to_lab(src[i]).L / 100.0);
    dst[i] = {g, g, g};
  }
  return out;
}

ImageBuffer apply_blur(const ImageBuffer& img, const BlurSpec& spec) {
  spec.validate();
  switch (spec.filter) {
    case BlurFilter::Gaussian: return gaussian_blur(img, spec.kernel_size);
    case BlurFilter::Median: return median_blur(img, odd_window(spec.kernel_size));
    case BlurFilter::Bilateral:
      return bilateral_blur(img, odd_window(spec.kernel_size), spec.kernel_size,
                            spec.range_sigma);
  }
  return img;
}

ImageBuffer recolor_region(const ImageBuffer& img, const Mask& region, double hue_deg,
                           double saturation) {
  if (region.width() != img.width() || region.height() != img.height()) {
    throw Error(ErrorCode::DimensionMismatch, "recolor mask does not match image dimensions");
  }
  ImageBuffer out = img;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      if (!region.get(x, y)) continue;
      const HsvColor hsv = rgb_to_hsv(img.at(x, y));
      out.at(x, y) = hsv_to_rgb8({hue_deg, saturation, hsv.v});
    }
  }
  return out;
}

ImageBuffer resample_letterbox(const ImageBuffer& src, int width, int height) {
  if (src.width() == width && src.height() == height) return src;
  ImageBuffer out(width, height, kWhite);
  const double scale = std::min(static_cast<double>(width) / src.width(),
                                static_cast<double>(height) / src.height());
  const double placed_w = src.width() * scale;
  const double placed_h = src.height() * scale;
  const double off_x = (width - placed_w) / 2.0;
  const double off_y = (height - placed_h) / 2.0;
  for (int y = 0; y < height; ++y) {
    const double cy = y + 0.5;
    if (cy < off_y || cy >= off_y + placed_h) continue;
    const double v = (cy - off_y) / scale - 0.5;
    for (int x = 0; x < width; ++x) {
      const double cx = x + 0.5;
      if (cx < off_x || cx >= off_x + placed_w) continue;
      const double u = (cx - off_x) / scale - 0.5;
      out.at(x, y) = {quantize(sample_channel(src, u, v, 0)), quantize(sample_channel(src, u, v, 1)),
                      quantize(sample_channel(src, u, v, 2))};
    }
  }
  return out;
}

Mask resample_nearest(const Mask& src, int width, int height) {
  if (src.width() == width && src.height() == height) return src;
  Mask out(width, height);
  for (int y = 0; y < height; ++y) {
    const int sy = std::min(src.height() - 1, static_cast<int>((y + 0.5) * src.height() / height));
    for (int x = 0; x < width; ++x) {
      const int sx = std::min(src.width() - 1, static_cast<int>((x + 0.5) * src.width() / width));
      out.set(x, y, src.get(sx, sy));
    }
  }
  return out;
}

}  // namespace atelier
