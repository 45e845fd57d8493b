// Copyright 2026 The MediFact Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MEDIFACT_CONFIG_HPP_
#define MEDIFACT_CONFIG_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "medifact/datamodel.hpp"
#include "medifact/eval.hpp"
#include "medifact/language.hpp"
#include "medifact/qa.hpp"
#include "medifact/selection.hpp"
#include "medifact/weaksup.hpp"

namespace medifact {

struct BackboneSpec {
  std::string id;
  std::filesystem::path features;  // FeatureTableBackbone JSON
};

struct ProviderIds {
  std::string encoder = "stub";
  std::string translator = "stub";
  std::string generator = "stub";
  std::string embedder = "stub";  // text encoder used by the semantic metric
  // Registered under the id "http" when present.
  std::optional<HttpEndpoint> http_translator;
  std::optional<HttpEndpoint> http_generator;
};

struct GenerationParams {
  std::size_t weaksup_top_n = 3;
  std::size_t extractive_top_k = 2;
};

/// Everything a pipeline run needs. Relative paths in the file are resolved
/// against the directory holding the config file.
struct PipelineConfig {
  std::map<Language, std::filesystem::path> train_encounters;
  std::map<Language, std::filesystem::path> test_encounters;  // defaults to train
  std::filesystem::path authors;
  std::filesystem::path image_dir;
  std::filesystem::path output_dir;

  std::string backbone = "stub";
  std::string selection_backbone;  // empty: same as backbone
  std::vector<BackboneSpec> backbones;
  std::string projection = "identity";  // "identity", "seeded" or a matrix file

  ProviderIds providers;
  SelectionMode mode = SelectionMode::kIndividual;
  std::optional<Language> pivot;
  std::vector<Language> languages;

  WeightingParams weighting;
  std::map<std::string, Credential> extra_credentials;
  bool use_human_scores = false;

  TrainingParams training;
  GenerationParams generation;
  MetricParams metrics;

  std::uint64_t seed = 7;
  std::string timestamp;  // recorded in reports; SOURCE_DATE_EPOCH wins when set

  std::string effective_selection_backbone() const;
  CredentialMap credential_map() const;
  // Throws Error(kConfig) when an invariant is broken.
  void validate() const;
  // Canonical JSON snapshot, paths as resolved.
  nlohmann::json to_json() const;
};

PipelineConfig parse_config(const nlohmann::json& document,
                            const std::filesystem::path& base_dir);
// Throws Error(kIo) if unreadable, Error(kParse)/Error(kConfig) if invalid.
PipelineConfig load_config(const std::filesystem::path& path);

}  // namespace medifact

#endif  // MEDIFACT_CONFIG_HPP_
