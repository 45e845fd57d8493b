// Copyright 2026 The MediFact Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MEDIFACT_VISION_HPP_
#define MEDIFACT_VISION_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "medifact/image_io.hpp"
#include "medifact/registry.hpp"

namespace medifact {

// Fixed-dimension feature vector tagged with the backbone that produced it.
class ImageEmbedding {
 public:
  // Throws Error(kValidation) on an empty vector or non-finite entries.
  ImageEmbedding(std::vector<double> values, std::string backbone_id);

  std::span<const double> values() const { return values_; }
  std::size_t dim() const { return values_.size(); }
  const std::string& backbone_id() const { return backbone_id_; }

  bool operator==(const ImageEmbedding&) const = default;

 private:
  std::vector<double> values_;
  std::string backbone_id_;
};

// Image feature extractor. Implementations must be safe for concurrent
// const use after construction.
class Backbone {
 public:
  virtual ~Backbone() = default;

  virtual const std::string& id() const = 0;
  virtual std::size_t dim() const = 0;
  virtual ImageEmbedding extract(const Image& image) const = 0;
};

/// Deterministic stand-in for a pretrained CNN. The image is box-filtered to
/// a 16x16 luma grid (values in [0, 1]), flattened row-major, and multiplied
/// by a fixed 64x256 matrix drawn from mt19937_64 seeded with kSeed: entry
/// (r, c) is the (256 r + c)-th draw u mapped to ((u >> 11) * 2^-53 * 2 - 1) / 16.
class StubBackbone final : public Backbone {
 public:
  static constexpr std::size_t kGrid = 16;
  static constexpr std::size_t kInputs = kGrid * kGrid;
  static constexpr std::size_t kDim = 64;
  static constexpr std::uint64_t kSeed = 0x4d45444946414354ULL;

  StubBackbone();

  const std::string& id() const override { return id_; }
  std::size_t dim() const override { return kDim; }
  ImageEmbedding extract(const Image& image) const override;

 private:
  std::string id_ = "stub";
  std::vector<double> projection_;  // kDim x kInputs, row-major
};

/// Backbone backed by features computed offline by a real network
/// (VGG16, ResNet, SqueezeNet, ...). The table is a JSON object
/// {"dim": N, "features": {"<image_id>": [N numbers], ...}} and lookups are by
/// Image::id.
class FeatureTableBackbone final : public Backbone {
 public:
  FeatureTableBackbone(std::string id, std::size_t dim,
                       std::map<std::string, std::vector<double>, std::less<>> features);
  static std::shared_ptr<FeatureTableBackbone> load(std::string id,
                                                    const std::filesystem::path& path);

  const std::string& id() const override { return id_; }
  std::size_t dim() const override { return dim_; }
  ImageEmbedding extract(const Image& image) const override;

 private:
  std::string id_;
  std::size_t dim_;
  std::map<std::string, std::vector<double>, std::less<>> features_;
};

// Registry that always contains the stub backbone.
class BackboneRegistry : public Registry<Backbone> {
 public:
  BackboneRegistry();
};

/// Area-averaged luma grid of `size` x `size` cells, row-major.
std::vector<double> luma_grid(const Image& image, std::size_t size);

/// Runs the registered backbone. Throws Error(kRegistry) for unknown ids and
/// Error(kInput) naming the image for empty or undecodable images.
ImageEmbedding extract_features(const Image& image, std::string_view backbone_id,
                                const BackboneRegistry& registry);

// Element-wise mean. Throws Error(kValidation) on an empty list or on mixed
// backbones/dims.
ImageEmbedding pool_encounter_embedding(std::span<const ImageEmbedding> embeddings);

// Stand-in embedding for encounters without images.
ImageEmbedding zero_embedding(const Backbone& backbone);

}  // namespace medifact

#endif  // MEDIFACT_VISION_HPP_
