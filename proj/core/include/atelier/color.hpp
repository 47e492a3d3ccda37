#pragma once

#include "atelier/image.hpp"

namespace atelier {

/// CIE L*a*b* under D65. L in [0,100]; a, b nominally in [-128,127].
struct LabColor {
  double L = 0.0;
  double a = 0.0;
  double b = 0.0;

  friend constexpr bool operator==(const LabColor&, const LabColor&) = default;
};

/// h in degrees [0,360), s and v in [0,1].
struct HsvColor {
  double h = 0.0;
  double s = 0.0;
  double v = 0.0;
};

/// Gamma-encoded sRGB with channels in [0,1]; may leave that range when
/// produced from an out-of-gamut Lab color.
struct RgbF {
  double r = 0.0;
  double g = 0.0;
  double b = 0.0;
};

RgbF to_rgbf(Rgb8 c) noexcept;
/// Clamps each channel to [0,1] and rounds to the nearest 8-bit level.
Rgb8 to_rgb8(RgbF c) noexcept;

LabColor rgb_to_lab(RgbF c) noexcept;
LabColor rgb_to_lab(Rgb8 c) noexcept;
RgbF lab_to_rgbf(LabColor lab) noexcept;
Rgb8 lab_to_rgb8(LabColor lab) noexcept;

HsvColor rgb_to_hsv(RgbF c) noexcept;
HsvColor rgb_to_hsv(Rgb8 c) noexcept;
RgbF hsv_to_rgbf(HsvColor hsv) noexcept;
Rgb8 hsv_to_rgb8(HsvColor hsv) noexcept;

/// Wraps any angle into [0,360).
double wrap_degrees(double deg) noexcept;

/// Plain Euclidean distance in L*a*b*.
double lab_distance(LabColor x, LabColor y) noexcept;

}  // namespace atelier
