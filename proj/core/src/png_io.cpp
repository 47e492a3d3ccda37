#include "atelier/png_io.hpp"

#include <png.h>
#include <sodium.h>

#include <cstring>
#include <fstream>
#include <iterator>

#include "atelier/error.hpp"

namespace atelier {

namespace {

struct DecodedRgba {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgba;
};

// The simplified libpng API keeps its state in png_image; png_image_free must
// run on every exit path.
class PngReader {
 public:
  PngReader() {
    std::memset(&image_, 0, sizeof(image_));
    image_.version = PNG_IMAGE_VERSION;
  }
  ~PngReader() { png_image_free(&image_); }
  PngReader(const PngReader&) = delete;
  PngReader& operator=(const PngReader&) = delete;

  png_image& get() { return image_; }

 private:
  png_image image_;
};

DecodedRgba decode_rgba(std::span<const std::uint8_t> data, std::size_t max_pixels) {
  if (data.empty()) throw Error(ErrorCode::BadImage, "empty PNG payload");
  PngReader reader;
  png_image& image = reader.get();
  if (png_image_begin_read_from_memory(&image, data.data(), data.size()) == 0) {
    throw Error(ErrorCode::BadImage, std::string("cannot read PNG: ") + image.message);
  }
  image.format = PNG_FORMAT_RGBA;
  if (image.width == 0 || image.height == 0) {
    throw Error(ErrorCode::BadImage, "PNG has zero dimension");
  }
  if (max_pixels != 0 &&
      static_cast<std::size_t>(image.width) * image.height > max_pixels) {
    throw Error(ErrorCode::TooLarge, "PNG is " + std::to_string(image.width) + "x" +
                                         std::to_string(image.height) + ", above the pixel limit");
  }
  DecodedRgba out;
  out.width = static_cast<int>(image.width);
  out.height = static_cast<int>(image.height);
  out.rgba.resize(PNG_IMAGE_SIZE(image));
  if (png_image_finish_read(&image, nullptr, out.rgba.data(), 0, nullptr) == 0) {
    throw Error(ErrorCode::BadImage, std::string("cannot decode PNG: ") + image.message);
  }
  return out;
}

Bytes encode_raw(int width, int height, std::uint32_t format, const void* buffer) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(width);
  image.height = static_cast<png_uint_32>(height);
  image.format = format;
  png_alloc_size_t size = 0;
  if (png_image_write_to_memory(&image, nullptr, &size, 0, buffer, 0, nullptr) == 0) {
    throw Error(ErrorCode::BadImage, std::string("cannot size PNG: ") + image.message);
  }
  Bytes out(size);
  if (png_image_write_to_memory(&image, out.data(), &size, 0, buffer, 0, nullptr) == 0) {
    throw Error(ErrorCode::BadImage, std::string("cannot encode PNG: ") + image.message);
  }
  out.resize(size);
  return out;
}

}  // namespace

ImageBuffer decode_png(std::span<const std::uint8_t> data, std::size_t max_pixels) {
  const DecodedRgba raw = decode_rgba(data, max_pixels);
  std::vector<Rgb8> pixels(static_cast<std::size_t>(raw.width) * raw.height);
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    const std::uint8_t* p = &raw.rgba[4 * i];
    const int a = p[3];
    auto over_white = [a](int c) {
      return static_cast<std::uint8_t>((c * a + 255 * (255 - a) + 127) / 255);
    };
    pixels[i] = {over_white(p[0]), over_white(p[1]), over_white(p[2])};
  }
  return ImageBuffer(raw.width, raw.height, std::move(pixels));
}

Bytes encode_png(const ImageBuffer& img) {
  static_assert(sizeof(Rgb8) == 3, "Rgb8 must be tightly packed for PNG encoding");
  return encode_raw(img.width(), img.height(), PNG_FORMAT_RGB, img.pixels().data());
}

Mask decode_mask_png(std::span<const std::uint8_t> data) {
  const DecodedRgba raw = decode_rgba(data, 0);
  Mask mask(raw.width, raw.height);
  for (int y = 0; y < raw.height; ++y) {
    for (int x = 0; x < raw.width; ++x) {
      const std::uint8_t* p = &raw.rgba[4 * (static_cast<std::size_t>(y) * raw.width + x)];
      const int gray = (p[0] + p[1] + p[2]) / 3;
      mask.set(x, y, gray * p[3] / 255 >= 128);
    }
  }
  return mask;
}

Bytes encode_mask_png(const Mask& mask) {
  std::vector<std::uint8_t> gray(mask.bits().size());
  for (std::size_t i = 0; i < gray.size(); ++i) gray[i] = mask.bits()[i] ? 255 : 0;
  return encode_raw(mask.width(), mask.height(), PNG_FORMAT_GRAY, gray.data());
}

Bytes read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::NotFound, "cannot open " + path.string());
  return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::NotFound, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

ImageBuffer load_png(const std::filesystem::path& path) { return decode_png(read_file(path)); }

void save_png(const std::filesystem::path& path, const ImageBuffer& img) {
  write_file(path, encode_png(img));
}

Mask load_mask_png(const std::filesystem::path& path) { return decode_mask_png(read_file(path)); }

std::string base64_encode(std::span<const std::uint8_t> data) {
  constexpr int variant = sodium_base64_VARIANT_ORIGINAL;
  std::string out(sodium_base64_ENCODED_LEN(data.size(), variant), '\0');
  sodium_bin2base64(out.data(), out.size(), data.data(), data.size(), variant);
  out.resize(std::strlen(out.c_str()));
  return out;
}

Bytes base64_decode(std::string_view text) {
  Bytes out(text.size() / 4 * 3 + 3);
  std::size_t len = 0;
  const char* end = nullptr;
  if (sodium_base642bin(out.data(), out.size(), text.data(), text.size(), "\n\r ", &len, &end,
                        sodium_base64_VARIANT_ORIGINAL) != 0 ||
      end != text.data() + text.size()) {
    throw Error(ErrorCode::BadRequest, "invalid base64 payload");
  }
  out.resize(len);
  return out;
}

}  // namespace atelier
