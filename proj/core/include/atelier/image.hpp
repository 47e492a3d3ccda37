#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace atelier {

struct Rgb8 {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend constexpr bool operator==(const Rgb8&, const Rgb8&) = default;
};

inline constexpr Rgb8 kWhite{255, 255, 255};
inline constexpr Rgb8 kBlack{0, 0, 0};

/// Owned row-major raster of 8-bit sRGB pixels.
class ImageBuffer {
 public:
  ImageBuffer() = default;
  ImageBuffer(int width, int height, Rgb8 fill = kBlack);
  ImageBuffer(int width, int height, std::vector<Rgb8> pixels);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return pixels_.size(); }
  bool empty() const noexcept { return pixels_.empty(); }

  Rgb8& at(int x, int y) { return pixels_[index(x, y)]; }
  const Rgb8& at(int x, int y) const { return pixels_[index(x, y)]; }

  std::span<Rgb8> pixels() noexcept { return pixels_; }
  std::span<const Rgb8> pixels() const noexcept { return pixels_; }

  bool contains(int x, int y) const noexcept {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }

  friend bool operator==(const ImageBuffer&, const ImageBuffer&) = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<Rgb8> pixels_;
};

/// Binary raster; any non-zero byte is foreground.
class Mask {
 public:
  Mask() = default;
  Mask(int width, int height, bool fill = false);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  bool empty() const noexcept { return bits_.empty(); }

  bool get(int x, int y) const { return bits_[index(x, y)] != 0; }
  void set(int x, int y, bool on = true) { bits_[index(x, y)] = on ? 1 : 0; }

  /// Out-of-range coordinates read as background.
  bool get_or_false(int x, int y) const noexcept {
    return x >= 0 && y >= 0 && x < width_ && y < height_ && bits_[index(x, y)] != 0;
  }

  std::size_t count() const noexcept;
  bool any() const noexcept;

  std::span<const std::uint8_t> bits() const noexcept { return bits_; }

  friend bool operator==(const Mask&, const Mask&) = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> bits_;
};

}  // namespace atelier
