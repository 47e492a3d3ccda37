#include "atelier/color.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace atelier {

namespace {

// sRGB primaries, D65. The reference white is taken as the matrix row sums so
// that (1,1,1) maps to exactly L=100, a=b=0.
constexpr std::array<std::array<double, 3>, 3> kRgbToXyz{{
    {0.4124564, 0.3575761, 0.1804375},
    {0.2126729, 0.7151522, 0.0721750},
    {0.0193339, 0.1191920, 0.9503041},
}};

constexpr double kWhiteX = 0.4124564 + 0.3575761 + 0.1804375;
constexpr double kWhiteY = 0.2126729 + 0.7151522 + 0.0721750;
constexpr double kWhiteZ = 0.0193339 + 0.1191920 + 0.9503041;

constexpr double kEpsilon = 216.0 / 24389.0;
constexpr double kKappa = 24389.0 / 27.0;

struct Matrix3 {
  std::array<std::array<double, 3>, 3> m;
};

Matrix3 invert(const std::array<std::array<double, 3>, 3>& a) {
  const double det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
                     a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
                     a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
  Matrix3 inv{};
  inv.m[0][0] = (a[1][1] * a[2][2] - a[1][2] * a[2][1]) / det;
  inv.m[0][1] = (a[0][2] * a[2][1] - a[0][1] * a[2][2]) / det;
  inv.m[0][2] = (a[0][1] * a[1][2] - a[0][2] * a[1][1]) / det;
  inv.m[1][0] = (a[1][2] * a[2][0] - a[1][0] * a[2][2]) / det;
  inv.m[1][1] = (a[0][0] * a[2][2] - a[0][2] * a[2][0]) / det;
  inv.m[1][2] = (a[0][2] * a[1][0] - a[0][0] * a[1][2]) / det;
  inv.m[2][0] = (a[1][0] * a[2][1] - a[1][1] * a[2][0]) / det;
  inv.m[2][1] = (a[0][1] * a[2][0] - a[0][0] * a[2][1]) / det;
  inv.m[2][2] = (a[0][0] * a[1][1] - a[0][1] * a[1][0]) / det;
  return inv;
}

const Matrix3& xyz_to_rgb() {
  static const Matrix3 inv = invert(kRgbToXyz);
  return inv;
}

double srgb_to_linear(double c) noexcept {
  return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

double linear_to_srgb(double c) noexcept {
  if (c <= 0.0031308) return 12.92 * c;
  return 1.055 * std::pow(c, 1.0 / 2.4) - 0.055;
}

double lab_f(double t) noexcept {
  return t > kEpsilon ? std::cbrt(t) : (kKappa * t + 16.0) / 116.0;
}

double lab_f_inv(double f) noexcept {
  const double f3 = f * f * f;
  return f3 > kEpsilon ? f3 : (116.0 * f - 16.0) / kKappa;
}

// 8-bit lookup of the transfer function; conversions from Rgb8 are hot in
// palette extraction.
const std::array<double, 256>& linear_table() {
  static const std::array<double, 256> table = [] {
    std::array<double, 256> t{};
    for (int i = 0; i < 256; ++i) t[static_cast<std::size_t>(i)] = srgb_to_linear(i / 255.0);
    return t;
  }();
  return table;
}

LabColor linear_rgb_to_lab(double r, double g, double b) noexcept {
  const auto& m = kRgbToXyz;
  const double x = m[0][0] * r + m[0][1] * g + m[0][2] * b;
  const double y = m[1][0] * r + m[1][1] * g + m[1][2] * b;
  const double z = m[2][0] * r + m[2][1] * g + m[2][2] * b;
  const double fx = lab_f(x / kWhiteX);
  const double fy = lab_f(y / kWhiteY);
  const double fz = lab_f(z / kWhiteZ);
  return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

}  // namespace

RgbF to_rgbf(Rgb8 c) noexcept { return {c.r / 255.0, c.g / 255.0, c.b / 255.0}; }

Rgb8 to_rgb8(RgbF c) noexcept {
  auto q = [](double v) {
    return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
  };
  return {q(c.r), q(c.g), q(c.b)};
}

LabColor rgb_to_lab(RgbF c) noexcept {
  return linear_rgb_to_lab(srgb_to_linear(c.r), srgb_to_linear(c.g), srgb_to_linear(c.b));
}

LabColor rgb_to_lab(Rgb8 c) noexcept {
  const auto& t = linear_table();
  return linear_rgb_to_lab(t[c.r], t[c.g], t[c.b]);
}

RgbF lab_to_rgbf(LabColor lab) noexcept {
  const double fy = (lab.L + 16.0) / 116.0;
  const double fx = fy + lab.a / 500.0;
  const double fz = fy - lab.b / 200.0;
  const double x = kWhiteX * lab_f_inv(fx);
  const double y = kWhiteY * (lab.L > kKappa * kEpsilon ? fy * fy * fy : lab.L / kKappa);
  const double z = kWhiteZ * lab_f_inv(fz);
  const auto& m = xyz_to_rgb().m;
  const double r = m[0][0] * x + m[0][1] * y + m[0][2] * z;
  const double g = m[1][0] * x + m[1][1] * y + m[1][2] * z;
  const double b = m[2][0] * x + m[2][1] * y + m[2][2] * z;
  // Negative linear values from out-of-gamut colors are clamped before the
  // transfer function, which is undefined there.
  return {linear_to_srgb(std::max(r, 0.0)), linear_to_srgb(std::max(g, 0.0)),
          linear_to_srgb(std::max(b, 0.0))};
}

Rgb8 lab_to_rgb8(LabColor lab) noexcept { return to_rgb8(lab_to_rgbf(lab)); }

HsvColor rgb_to_hsv(RgbF c) noexcept {
  const double mx = std::max({c.r, c.g, c.b});
  const double mn = std::min({c.r, c.g, c.b});
  const double delta = mx - mn;
  HsvColor out{0.0, 0.0, mx};
  if (mx > 0.0) out.s = delta / mx;
  if (delta <= 0.0) return out;
  double h = 0.0;
  if (mx == c.r) {
    h = 60.0 * std::fmod((c.g - c.b) / delta, 6.0);
  } else if (mx == c.g) {
    h = 60.0 * ((c.b - c.r) / delta + 2.0);
  } else {
    h = 60.0 * ((c.r - c.g) / delta + 4.0);
  }
  out.h = wrap_degrees(h);
  return out;
}

HsvColor rgb_to_hsv(Rgb8 c) noexcept { return rgb_to_hsv(to_rgbf(c)); }

RgbF hsv_to_rgbf(HsvColor hsv) noexcept {
  const double h = wrap_degrees(hsv.h);
  const double s = std::clamp(hsv.s, 0.0, 1.0);
  const double v = std::clamp(hsv.v, 0.0, 1.0);
  const double c = v * s;
  const double hp = h / 60.0;
  const double x = c * (1.0 - std::fabs(std::fmod(hp, 2.0) - 1.0));
  const double m = v - c;
  double r = 0, g = 0, b = 0;
  switch (static_cast<int>(hp)) {
    case 0: r = c; g = x; break;
    case 1: r = x; g = c; break;
    case 2: g = c; b = x; break;
    case 3: g = x; b = c; break;
    case 4: r = x; b = c; break;
    default: r = c; b = x; break;
  }
  return {r + m, g + m, b + m};
}

Rgb8 hsv_to_rgb8(HsvColor hsv) noexcept { return to_rgb8(hsv_to_rgbf(hsv)); }

double wrap_degrees(double deg) noexcept {
  double w = std::fmod(deg, 360.0);
  if (w < 0.0) w += 360.0;
  // fmod of a tiny negative number can land exactly on 360 after the add.
  if (w >= 360.0) w = 0.0;
  return w;
}

double lab_distance(LabColor x, LabColor y) noexcept {
  const double dl = x.L - y.L;
  const double da = x.a - y.a;
  const double db = x.b - y.b;
  return std::sqrt(dl * dl + da * da + db * db);
}

}  // namespace atelier
