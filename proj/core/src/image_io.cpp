// Copyright 2026 The MediFact Authors
// SPDX-License-Identifier: Apache-2.0

#include "medifact/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <cstring>
#include <limits>
#include <string>

#include "medifact/error.hpp"
#include "medifact/hashing.hpp"

namespace medifact {
namespace {

[[noreturn]] void fail(const std::string& id, const std::string& why) {
  throw Error(ErrorKind::kInput, "image '" + id + "' cannot be decoded: " + why);
}

class PnmReader {
 public:
  PnmReader(std::span<const std::uint8_t> bytes, const std::string& id) : bytes_(bytes), id_(id) {}

  Image read() {
    if (bytes_.size() < 2 || bytes_[0] != 'P') fail(id_, "not a PNM file");
    const char kind = static_cast<char>(bytes_[1]);
    pos_ = 2;
    int channels = 0;
    bool ascii = false;
    switch (kind) {
      case '2': channels = 1; ascii = true; break;
      case '3': channels = 3; ascii = true; break;
      case '5': channels = 1; break;
      case '6': channels = 3; break;
      default: fail(id_, std::string("unsupported PNM variant P") + kind);
    }
    Image image;
    image.id = id_;
    image.width = static_cast<int>(next_number());
    image.height = static_cast<int>(next_number());
    const unsigned long maxval = next_number();
    if (image.width <= 0 || image.height <= 0) fail(id_, "zero-sized image");
    if (maxval == 0 || maxval > 65535) fail(id_, "invalid maxval");
    image.channels = channels;
    const std::size_t count =
        static_cast<std::size_t>(image.width) * static_cast<std::size_t>(image.height) * channels;
    image.pixels.resize(count);

    auto scale = [maxval](unsigned long v) {
      return static_cast<std::uint8_t>((v * 255 + maxval / 2) / maxval);
    };
    if (ascii) {
      for (std::size_t i = 0; i < count; ++i) {
        unsigned long v = next_number();
        if (v > maxval) fail(id_, "sample exceeds maxval");
        image.pixels[i] = scale(v);
      }
      return image;
    }
    ++pos_;  // single whitespace after maxval
    const std::size_t sample_bytes = maxval > 255 ? 2 : 1;
    if (bytes_.size() < pos_ + count * sample_bytes) fail(id_, "truncated pixel data");
    for (std::size_t i = 0; i < count; ++i) {
      unsigned long v = bytes_[pos_ + i * sample_bytes];
      if (sample_bytes == 2) v = (v << 8) | bytes_[pos_ + i * 2 + 1];
      if (v > maxval) fail(id_, "sample exceeds maxval");
      image.pixels[i] = scale(v);
    }
    return image;
  }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const char c = static_cast<char>(bytes_[pos_]);
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        return;
      }
    }
  }

  unsigned long next_number() {
    skip_space_and_comments();
    if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_])) fail(id_, "malformed header");
    unsigned long value = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > std::numeric_limits<int>::max()) fail(id_, "number out of range");
      ++pos_;
    }
    return value;
  }

  std::span<const std::uint8_t> bytes_;
  const std::string& id_;
  std::size_t pos_ = 0;
};

Image decode_png(std::span<const std::uint8_t> bytes, const std::string& id) {
  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&png, bytes.data(), bytes.size())) {
    fail(id, png.message);
  }
  const bool color = (png.format & PNG_FORMAT_FLAG_COLOR) != 0;
  png.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  Image image;
  image.id = id;
  image.width = static_cast<int>(png.width);
  image.height = static_cast<int>(png.height);
  image.channels = color ? 3 : 1;
  image.pixels.resize(PNG_IMAGE_SIZE(png));
  if (!png_image_finish_read(&png, nullptr, image.pixels.data(), 0, nullptr)) {
    std::string why = png.message;
    png_image_free(&png);
    fail(id, why);
  }
  if (image.empty()) fail(id, "zero-sized image");
  return image;
}

}  // namespace

double Image::gray(int x, int y) const {
  const std::size_t base =
      (static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)) *
      static_cast<std::size_t>(channels);
  if (channels == 1) return pixels[base] / 255.0;
  return (0.299 * pixels[base] + 0.587 * pixels[base + 1] + 0.114 * pixels[base + 2]) / 255.0;
}

Image decode_image(std::span<const std::uint8_t> bytes, const std::string& id) {
  static constexpr std::array<std::uint8_t, 8> kPngSignature = {0x89, 'P', 'N', 'G',
                                                               '\r', '\n', 0x1A, '\n'};
  if (bytes.size() >= kPngSignature.size() &&
      std::equal(kPngSignature.begin(), kPngSignature.end(), bytes.begin())) {
    return decode_png(bytes, id);
  }
  if (bytes.size() >= 2 && bytes[0] == 'P') return PnmReader(bytes, id).read();
  fail(id, "unrecognized image format");
}

std::vector<std::uint8_t> encode_pnm(const Image& image) {
  if (image.channels != 1 && image.channels != 3) {
    throw Error(ErrorKind::kInput, "image '" + image.id + "': PNM needs 1 or 3 channels");
  }
  const std::string header = std::string(image.channels == 1 ? "P5" : "P6") + "\n" +
                             std::to_string(image.width) + " " + std::to_string(image.height) +
                             "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), image.pixels.begin(), image.pixels.end());
  return out;
}

ImageStore::ImageStore(std::filesystem::path directory) : directory_(std::move(directory)) {}

std::filesystem::path ImageStore::resolve(const std::string& image_id) const {
  if (image_id.empty() || image_id.find("..") != std::string::npos) {
    throw Error(ErrorKind::kInput, "invalid image id '" + image_id + "'");
  }
  std::error_code ec;
  const std::filesystem::path exact = directory_ / image_id;
  if (std::filesystem::is_regular_file(exact, ec)) return exact;
  for (const char* ext : {".png", ".pgm", ".ppm", ".pnm"}) {
    std::filesystem::path candidate = directory_ / (image_id + ext);
    if (std::filesystem::is_regular_file(candidate, ec)) return candidate;
  }
  throw Error(ErrorKind::kIo,
              "image '" + image_id + "' not found under '" + directory_.string() + "'");
}

Image ImageStore::load(const std::string& image_id) const {
  const std::string bytes = read_file(resolve(image_id));
  return decode_image(
      std::span(reinterpret_cast<const std::uint8_t*>(bytes.data()), bytes.size()), image_id);
}

}  // namespace medifact
