// Copyright 2026 The MediFact Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MEDIFACT_PIPELINE_HPP_
#define MEDIFACT_PIPELINE_HPP_

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "medifact/config.hpp"
#include "medifact/eval.hpp"
#include "medifact/qa.hpp"
#include "medifact/selection.hpp"
#include "medifact/translation.hpp"
#include "medifact/vision.hpp"

namespace medifact {

// Provider registries wired from a config. Frozen after construction.
struct ProviderSet {
  BackboneRegistry backbones;
  EncoderRegistry encoders;
  TranslatorRegistry translators;
  GeneratorRegistry generators;

  static ProviderSet from_config(const PipelineConfig& config);
};

struct StageOptions {
  bool force = false;
};

struct StageResult {
  bool skipped = false;  // up to date, nothing written
  std::vector<std::filesystem::path> outputs;
  std::size_t warnings = 0;
};

/// Stage artifacts, all under config.output_dir:
///   dataset/{train,test}.<lang>.json   cleaned and weighted encounters
///   models/<backbone>/<lang>.json      one classifier per language
///   predictions/<backbone>-<mode>.json prediction file
///   reports/<backbone>-<mode>.{json,txt}
///   reports/summary.{json,txt}
///   manifest.json
class Pipeline {
 public:
  explicit Pipeline(PipelineConfig config);
  Pipeline(PipelineConfig config, std::shared_ptr<const ProviderSet> providers);

  const PipelineConfig& config() const { return config_; }
  const ProviderSet& providers() const { return *providers_; }

  StageResult ingest(const StageOptions& options = {});
  StageResult train(const StageOptions& options = {});
  StageResult generate(const StageOptions& options = {});
  // `predictions` defaults to this run's prediction file.
  StageResult evaluate(const StageOptions& options = {},
                       std::optional<std::filesystem::path> predictions = std::nullopt);
  StageResult report(const StageOptions& options = {});

  // "<backbone>-<Mode>", e.g. "stub-Individual".
  std::string run_label() const;
  std::filesystem::path dataset_path(const std::string& split, Language language) const;
  std::filesystem::path model_path(Language language) const;
  std::filesystem::path predictions_path() const;
  std::filesystem::path report_path(const std::string& extension) const;

  // Languages that need a trained model: participating plus the pivot.
  std::vector<Language> model_languages() const;

 private:
  PipelineConfig config_;
  std::shared_ptr<const ProviderSet> providers_;
};

// Returns a copy of `config` with the backbone replaced.
PipelineConfig with_backbone(PipelineConfig config, const std::string& backbone);
PipelineConfig with_mode(PipelineConfig config, SelectionMode mode);

}  // namespace medifact

#endif  // MEDIFACT_PIPELINE_HPP_
