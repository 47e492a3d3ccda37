#include "atelier/image.hpp"

#include <algorithm>
#include <string>

#include "atelier/error.hpp"

namespace atelier {

namespace {

void check_dimensions(int width, int height) {
  if (width <= 0 || height <= 0) {
    throw Error(ErrorCode::BadImage, "image dimensions must be positive, got " +
                                         std::to_string(width) + "x" + std::to_string(height));
  }
}

}  // namespace

ImageBuffer::ImageBuffer(int width, int height, Rgb8 fill)
    : width_(width), height_(height) {
  check_dimensions(width, height);
  pixels_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

ImageBuffer::ImageBuffer(int width, int height, std::vector<Rgb8> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  check_dimensions(width, height);
  if (pixels_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw Error(ErrorCode::DimensionMismatch, "pixel count does not match width x height");
  }
}

Mask::Mask(int width, int height, bool fill) : width_(width), height_(height) {
  check_dimensions(width, height);
  bits_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height),
               fill ? 1 : 0);
}

std::size_t Mask::count() const noexcept {
  return static_cast<std::size_t>(std::count_if(bits_.begin(), bits_.end(),
                                                [](std::uint8_t b) { return b != 0; }));
}

bool Mask::any() const noexcept {
  return std::any_of(bits_.begin(), bits_.end(), [](std::uint8_t b) { return b != 0; });
}

}  // namespace atelier
