#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "atelier/image.hpp"

namespace atelier {

using Bytes = std::vector<std::uint8_t>;

/// Decodes 8-bit gray/RGB/RGBA (palette and 16-bit are converted). Alpha is
/// composited over white. Throws Error(BadImage) on malformed input and
/// Error(TooLarge) when max_pixels is nonzero and exceeded (checked from the
/// header, before pixel data is decoded).
ImageBuffer decode_png(std::span<const std::uint8_t> data, std::size_t max_pixels = 0);
Bytes encode_png(const ImageBuffer& img);

/// Grayscale mask: foreground where the (alpha-over-black) gray level >= 128.
Mask decode_mask_png(std::span<const std::uint8_t> data);
Bytes encode_mask_png(const Mask& mask);

Bytes read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> data);
void write_file(const std::filesystem::path& path, const std::string& text);

ImageBuffer load_png(const std::filesystem::path& path);
void save_png(const std::filesystem::path& path, const ImageBuffer& img);
Mask load_mask_png(const std::filesystem::path& path);

std::string base64_encode(std::span<const std::uint8_t> data);
/// Throws Error(BadRequest) on invalid input.
Bytes base64_decode(std::string_view text);

}  // namespace atelier
