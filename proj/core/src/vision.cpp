// Copyright 2026 The MediFact Authors
// SPDX-License-Identifier: Apache-2.0

#include "medifact/vision.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <nlohmann/json.hpp>

#include "medifact/error.hpp"
#include "medifact/hashing.hpp"

namespace medifact {

ImageEmbedding::ImageEmbedding(std::vector<double> values, std::string backbone_id)
    : values_(std::move(values)), backbone_id_(std::move(backbone_id)) {
  if (values_.empty()) {
    throw Error(ErrorKind::kValidation, "embedding from '" + backbone_id_ + "' is empty");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) {
      throw Error(ErrorKind::kValidation,
                  "embedding from '" + backbone_id_ + "' has a non-finite entry");
    }
  }
}

std::vector<double> luma_grid(const Image& image, std::size_t size) {
  std::vector<double> grid(size * size, 0.0);
  const double sy = static_cast<double>(image.height) / static_cast<double>(size);
  const double sx = static_cast<double>(image.width) / static_cast<double>(size);
  for (std::size_t gy = 0; gy < size; ++gy) {
    const double y0 = gy * sy;
    const double y1 = (gy + 1) * sy;
    for (std::size_t gx = 0; gx < size; ++gx) {
      const double x0 = gx * sx;
      const double x1 = (gx + 1) * sx;
      double sum = 0.0;
      for (int py = static_cast<int>(std::floor(y0)); py < image.height && py < y1; ++py) {
        const double oy = std::min<double>(py + 1, y1) - std::max<double>(py, y0);
        if (oy <= 0.0) continue;
        for (int px = static_cast<int>(std::floor(x0)); px < image.width && px < x1; ++px) {
          const double ox = std::min<double>(px + 1, x1) - std::max<double>(px, x0);
          if (ox <= 0.0) continue;
          sum += oy * ox * image.gray(px, py);
        }
      }
      grid[gy * size + gx] = sum / (sy * sx);
    }
  }
  return grid;
}

StubBackbone::StubBackbone() : projection_(kDim * kInputs) {
  std::mt19937_64 rng(kSeed);
  for (double& entry : projection_) {
    const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    entry = (unit * 2.0 - 1.0) / 16.0;
  }
}

ImageEmbedding StubBackbone::extract(const Image& image) const {
  if (image.empty()) {
    throw Error(ErrorKind::kInput, "image '" + image.id + "' is empty");
  }
  const std::vector<double> grid = luma_grid(image, kGrid);
  std::vector<double> out(kDim, 0.0);
  for (std::size_t r = 0; r < kDim; ++r) {
    double acc = 0.0;
    const double* row = projection_.data() + r * kInputs;
    for (std::size_t c = 0; c < kInputs; ++c) acc += row[c] * grid[c];
    out[r] = acc;
  }
  return ImageEmbedding(std::move(out), id_);
}

FeatureTableBackbone::FeatureTableBackbone(
    std::string id, std::size_t dim,
    std::map<std::string, std::vector<double>, std::less<>> features)
    : id_(std::move(id)), dim_(dim), features_(std::move(features)) {
  if (dim_ == 0) throw Error(ErrorKind::kConfig, "backbone '" + id_ + "' declares dim 0");
  for (const auto& [image_id, values] : features_) {
    if (values.size() != dim_) {
      throw Error(ErrorKind::kConfig, "backbone '" + id_ + "': features of '" + image_id +
                                          "' have " + std::to_string(values.size()) +
                                          " entries, expected " + std::to_string(dim_));
    }
  }
}

std::shared_ptr<FeatureTableBackbone> FeatureTableBackbone::load(
    std::string id, const std::filesystem::path& path) {
  nlohmann::json document;
  try {
    document = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::kParse, path.string() + ": malformed JSON at byte " +
                                       std::to_string(e.byte), e.byte);
  }
  try {
    const auto dim = document.at("dim").get<std::size_t>();
    auto features =
        document.at("features").get<std::map<std::string, std::vector<double>, std::less<>>>();
    return std::make_shared<FeatureTableBackbone>(std::move(id), dim, std::move(features));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kConfig, path.string() + ": " + e.what());
  }
}

ImageEmbedding FeatureTableBackbone::extract(const Image& image) const {
  auto it = features_.find(image.id);
  if (it == features_.end()) {
    throw Error(ErrorKind::kInput,
                "image '" + image.id + "' has no precomputed features for '" + id_ + "'");
  }
  return ImageEmbedding(it->second, id_);
}

BackboneRegistry::BackboneRegistry() : Registry<Backbone>("backbone") {
  add(std::make_shared<StubBackbone>());
}

ImageEmbedding extract_features(const Image& image, std::string_view backbone_id,
                                const BackboneRegistry& registry) {
  const Backbone& backbone = registry.get(backbone_id);
  ImageEmbedding out = backbone.extract(image);
  if (out.dim() != backbone.dim()) {
    throw Error(ErrorKind::kValidation, "backbone '" + backbone.id() + "' returned dim " +
                                            std::to_string(out.dim()) + ", declared " +
                                            std::to_string(backbone.dim()));
  }
  return out;
}

ImageEmbedding pool_encounter_embedding(std::span<const ImageEmbedding> embeddings) {
  if (embeddings.empty()) {
    throw Error(ErrorKind::kValidation, "cannot pool an empty list of embeddings");
  }
  const ImageEmbedding& first = embeddings.front();
  for (const ImageEmbedding& e : embeddings) {
    if (e.backbone_id() != first.backbone_id() || e.dim() != first.dim()) {
      throw Error(ErrorKind::kValidation, "cannot pool embeddings from different backbones");
    }
  }
  // Each coordinate is summed in sorted order so the mean is bit-identical
  // under any permutation of the inputs.
  const double n = static_cast<double>(embeddings.size());
  std::vector<double> mean(first.dim(), 0.0);
  std::vector<double> column(embeddings.size());
  for (std::size_t i = 0; i < mean.size(); ++i) {
    for (std::size_t k = 0; k < embeddings.size(); ++k) column[k] = embeddings[k].values()[i];
    std::sort(column.begin(), column.end());
    double sum = 0.0;
    for (double v : column) sum += v;
    mean[i] = sum / n;
  }
  return ImageEmbedding(std::move(mean), first.backbone_id());
}

ImageEmbedding zero_embedding(const Backbone& backbone) {
  return ImageEmbedding(std::vector<double>(backbone.dim(), 0.0), backbone.id());
}

}  // namespace medifact
