// Copyright 2026 The MediFact Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MEDIFACT_WEAKSUP_HPP_
#define MEDIFACT_WEAKSUP_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "medifact/datamodel.hpp"
#include "medifact/vision.hpp"

namespace medifact {

struct LabelClass {
  int class_id = 0;
  std::string canonical_text;
  std::size_t support = 0;

  bool operator==(const LabelClass&) const = default;
};

// Canonical responses, ids contiguous from 0 in byte order of the text.
class LabelSpace {
 public:
  LabelSpace() = default;
  // Throws Error(kValidation) if ids are not 0..n-1 in order or texts repeat.
  explicit LabelSpace(std::vector<LabelClass> classes);

  std::size_t size() const { return classes_.size(); }
  const std::vector<LabelClass>& classes() const { return classes_; }
  const LabelClass& at(int class_id) const;

  bool operator==(const LabelSpace&) const = default;

 private:
  std::vector<LabelClass> classes_;
};

struct LabelInduction {
  LabelSpace label_space;
  std::map<std::string, int> assignment;  // encounter_id -> class_id
  std::size_t dropped = 0;                // encounters with no positive weight
};

/// Assigns each encounter the class of its highest-weight gold response
/// (ties: byte-wise smallest cleaned text). Encounters without a positive
/// weight are dropped and counted. Throws Error(kTrainingData) when nothing
/// is left. Independent of input order.
LabelInduction induce_labels(std::span<const Encounter> encounters);

struct TrainingParams {
  double lambda = 1e-2;
  int max_iterations = 500;  // epochs over the training set
  std::uint64_t seed = 7;

  bool operator==(const TrainingParams&) const = default;
};

// One-vs-rest linear max-margin classifier.
struct WeakSupModel {
  std::vector<std::vector<double>> weights;  // classes x dim
  std::vector<double> bias;                  // classes
  std::string backbone_id;
  LabelSpace label_space;
  TrainingParams params;

  std::size_t num_classes() const { return weights.size(); }
  std::size_t dim() const { return weights.empty() ? 0 : weights.front().size(); }

  bool operator==(const WeakSupModel&) const = default;
};

/// Trains one hinge-loss classifier per class with Pegasos-style stochastic
/// subgradient steps (step 1 / (lambda t), projection onto the ball of radius
/// 1 / sqrt(lambda)). The bias is an extra constant-1 feature. Each epoch
/// visits the samples in a Fisher-Yates order drawn from mt19937_64(seed), so
/// identical inputs give a bit-identical model.
///
/// Throws Error(kValidation) on length/dimension/backbone mismatches or labels
/// outside the label space, Error(kDegenerateData) when fewer than two
/// distinct labels are present.
WeakSupModel train_classifier(std::span<const ImageEmbedding> features,
                              std::span<const int> labels, const LabelSpace& label_space,
                              const TrainingParams& params);

struct ClassPrediction {
  int class_id = 0;
  std::string canonical_text;
  std::vector<double> margins;  // W x + b, one per class
};

// argmax of W x + b, ties to the lowest class id.
ClassPrediction predict_response(const WeakSupModel& model, const ImageEmbedding& embedding);

// Class ids ordered by descending margin, ties by ascending id.
std::vector<int> rank_classes(std::span<const double> margins);

nlohmann::json model_to_json(const WeakSupModel& model);
WeakSupModel model_from_json(const nlohmann::json& document);
void save_model(const WeakSupModel& model, const std::filesystem::path& path);
WeakSupModel load_model(const std::filesystem::path& path);

}  // namespace medifact

#endif  // MEDIFACT_WEAKSUP_HPP_
