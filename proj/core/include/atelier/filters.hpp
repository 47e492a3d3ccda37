#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "atelier/image.hpp"

namespace atelier {

enum class BlurFilter { Gaussian, Bilateral, Median };

std::string_view to_string(BlurFilter f) noexcept;
std::optional<BlurFilter> parse_blur_filter(std::string_view name) noexcept;

inline constexpr double kMinKernelSize = 1.5;
inline constexpr double kMaxKernelSize = 4.9;

/// Blur settings for value thumbnails.
///
/// For the Gaussian filter `kernel_size` is the standard deviation and the
/// window spans 2*ceil(3*sigma)+1 pixels. Median and bilateral use the
/// smallest odd window that is at least 2*kernel_size+1; the bilateral filter
/// also uses `kernel_size` as its spatial sigma and `range_sigma` (8-bit
/// units) for the intensity term.
struct BlurSpec {
  BlurFilter filter = BlurFilter::Gaussian;
  double kernel_size = 2.5;
  double range_sigma = 25.0;

  /// Throws Error(InvalidKernel) when kernel_size is outside [1.5, 4.9].
  void validate() const;
};

int gaussian_window(double sigma) noexcept;
int odd_window(double kernel_size) noexcept;

/// Neutral gray image whose level is round(255 * L* / 100).
ImageBuffer to_value_image(const ImageBuffer& img);

/// Clamp-to-edge blur; output has the input's dimensions.
ImageBuffer apply_blur(const ImageBuffer& img, const BlurSpec& spec);

/// Sets hue and saturation of every masked pixel, keeping its HSV value.
ImageBuffer recolor_region(const ImageBuffer& img, const Mask& region, double hue_deg,
                           double saturation);

/// Bilinear resample of `src` into a `width` x `height` frame. When aspect
/// ratios differ the image is scaled to fit and centered on white.
ImageBuffer resample_letterbox(const ImageBuffer& src, int width, int height);

/// Nearest-neighbour resample, used for masks.
Mask resample_nearest(const Mask& src, int width, int height);

}  // namespace atelier
