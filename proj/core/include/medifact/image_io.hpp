// Copyright 2026 The MediFact Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MEDIFACT_IMAGE_IO_HPP_
#define MEDIFACT_IMAGE_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace medifact {

// Decoded 8-bit raster, row-major, interleaved channels (1 = gray, 3 = RGB).
struct Image {
  std::string id;
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<std::uint8_t> pixels;

  bool empty() const { return width <= 0 || height <= 0 || pixels.empty(); }
  // Luma in [0, 1]; Rec. 601 weights for RGB.
  double gray(int x, int y) const;
};

/// Decodes PNG or binary/ASCII PNM (P2, P3, P5, P6) bytes. The format is
/// sniffed from the content. Throws Error(kInput) naming `id` when the bytes
/// cannot be decoded.
Image decode_image(std::span<const std::uint8_t> bytes, const std::string& id);

// Writes a binary PGM (channels == 1) or PPM (channels == 3).
std::vector<std::uint8_t> encode_pnm(const Image& image);

// Resolves image ids against a directory. An id matches `<dir>/<id>` or
// `<dir>/<id>.{png,pgm,ppm,pnm}`, tried in that order.
class ImageStore {
 public:
  explicit ImageStore(std::filesystem::path directory);

  const std::filesystem::path& directory() const { return directory_; }
  // Throws Error(kIo) if no file matches, Error(kInput) if it cannot be decoded.
  std::filesystem::path resolve(const std::string& image_id) const;
  Image load(const std::string& image_id) const;

 private:
  std::filesystem::path directory_;
};

}  // namespace medifact

#endif  // MEDIFACT_IMAGE_IO_HPP_
