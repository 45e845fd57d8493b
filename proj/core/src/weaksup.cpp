// Copyright 2026 The MediFact Authors
// SPDX-License-Identifier: Apache-2.0

#include "medifact/weaksup.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "medifact/error.hpp"
#include "medifact/hashing.hpp"
#include "medifact/text.hpp"

namespace medifact {
namespace {

using nlohmann::json;

constexpr int kModelFormatVersion = 1;

void validate_params(const TrainingParams& params) {
  if (!(params.lambda > 0.0) || !std::isfinite(params.lambda)) {
    throw Error(ErrorKind::kConfig, "training: lambda must be a positive finite number");
  }
  if (params.max_iterations < 1) {
    throw Error(ErrorKind::kConfig, "training: max_iterations must be at least 1");
  }
}

}  // namespace

LabelSpace::LabelSpace(std::vector<LabelClass> classes) : classes_(std::move(classes)) {
  std::set<std::string> seen;
  for (std::size_t i = 0; i < classes_.size(); ++i) {
    if (classes_[i].class_id != static_cast<int>(i)) {
      throw Error(ErrorKind::kValidation, "label space class ids must be contiguous from 0");
    }
    if (!seen.insert(clean_text(classes_[i].canonical_text)).second) {
      throw Error(ErrorKind::kValidation,
                  "duplicate canonical text '" + classes_[i].canonical_text + "'");
    }
  }
}

const LabelClass& LabelSpace::at(int class_id) const {
  if (class_id < 0 || static_cast<std::size_t>(class_id) >= classes_.size()) {
    throw Error(ErrorKind::kValidation, "class id " + std::to_string(class_id) + " out of range");
  }
  return classes_[static_cast<std::size_t>(class_id)];
}

LabelInduction induce_labels(std::span<const Encounter> encounters) {
  std::map<std::string, std::string> top_text;  // encounter_id -> canonical text
  std::size_t dropped = 0;
  for (const Encounter& e : encounters) {
    const GoldResponse* best = nullptr;
    std::string best_text;
    for (const GoldResponse& g : e.gold_responses) {
      const double w = g.weight.value_or(0.0);
      if (!(w > 0.0)) continue;
      std::string text = clean_text(g.text);
      if (text.empty()) continue;
      const double best_w = best ? best->weight.value_or(0.0) : 0.0;
      if (best == nullptr || w > best_w || (w == best_w && text < best_text)) {
        best = &g;
        best_text = std::move(text);
      }
    }
    if (best == nullptr) {
      ++dropped;
      continue;
    }
    top_text[e.encounter_id] = std::move(best_text);
  }
  if (top_text.empty()) {
    throw Error(ErrorKind::kTrainingData,
                "no encounter has a gold response with positive weight (" +
                    std::to_string(dropped) + " dropped)");
  }

  std::map<std::string, std::size_t> support;
  for (const auto& [id, text] : top_text) ++support[text];
  std::vector<LabelClass> classes;
  std::map<std::string, int> class_of;
  for (const auto& [text, count] : support) {
    const int id = static_cast<int>(classes.size());
    class_of[text] = id;
    classes.push_back(LabelClass{id, text, count});
  }
  LabelInduction out;
  out.label_space = LabelSpace(std::move(classes));
  for (const auto& [id, text] : top_text) out.assignment[id] = class_of.at(text);
  out.dropped = dropped;
  return out;
}

WeakSupModel train_classifier(std::span<const ImageEmbedding> features,
                              std::span<const int> labels, const LabelSpace& label_space,
                              const TrainingParams& params) {
  validate_params(params);
  if (features.size() != labels.size()) {
    throw Error(ErrorKind::kValidation, "features and labels differ in length");
  }
  if (features.size() < 2) {
    throw Error(ErrorKind::kDegenerateData, "need at least two training examples");
  }
  const std::size_t dim = features.front().dim();
  const std::string& backbone = features.front().backbone_id();
  for (const ImageEmbedding& f : features) {
    if (f.dim() != dim) throw Error(ErrorKind::kValidation, "embedding dimensions differ");
    if (f.backbone_id() != backbone) {
      throw Error(ErrorKind::kValidation, "embeddings come from different backbones");
    }
  }
  const std::size_t num_classes = label_space.size();
  std::set<int> distinct;
  for (int label : labels) {
    if (label < 0 || static_cast<std::size_t>(label) >= num_classes) {
      throw Error(ErrorKind::kValidation,
                  "label " + std::to_string(label) + " outside the label space");
    }
    distinct.insert(label);
  }
  if (distinct.size() < 2) {
    throw Error(ErrorKind::kDegenerateData, "training data contains a single class");
  }

  // Row c holds [w_c, b_c]; the bias multiplies a constant 1 feature.
  const std::size_t width = dim + 1;
  std::vector<std::vector<double>> w(num_classes, std::vector<double>(width, 0.0));
  const double radius = 1.0 / std::sqrt(params.lambda);
  std::vector<std::size_t> order(features.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(params.seed);
  std::uint64_t t = 0;

  for (int epoch = 0; epoch < params.max_iterations; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[rng() % i]);
    }
    for (std::size_t sample : order) {
      ++t;
      const double eta = 1.0 / (params.lambda * static_cast<double>(t));
      const double shrink = 1.0 - eta * params.lambda;
      std::span<const double> x = features[sample].values();
      for (std::size_t c = 0; c < num_classes; ++c) {
        std::vector<double>& wc = w[c];
        const double y = labels[sample] == static_cast<int>(c) ? 1.0 : -1.0;
        double score = wc[dim];
        for (std::size_t j = 0; j < dim; ++j) score += wc[j] * x[j];
        const bool violated = y * score < 1.0;
        for (double& v : wc) v *= shrink;
        if (violated) {
          for (std::size_t j = 0; j < dim; ++j) wc[j] += eta * y * x[j];
          wc[dim] += eta * y;
        }
        double norm_sq = 0.0;
        for (double v : wc) norm_sq += v * v;
        const double norm = std::sqrt(norm_sq);
        if (norm > radius) {
          const double scale = radius / norm;
          for (double& v : wc) v *= scale;
        }
      }
    }
  }

  WeakSupModel model;
  model.backbone_id = backbone;
  model.label_space = label_space;
  model.params = params;
  model.bias.reserve(num_classes);
  for (auto& row : w) {
    model.bias.push_back(row[dim]);
    row.pop_back();
    model.weights.push_back(std::move(row));
  }
  return model;
}

std::vector<int> rank_classes(std::span<const double> margins) {
  std::vector<int> ids(margins.size());
  std::iota(ids.begin(), ids.end(), 0);
  std::stable_sort(ids.begin(), ids.end(), [&](int a, int b) { return margins[a] > margins[b]; });
  return ids;
}

ClassPrediction predict_response(const WeakSupModel& model, const ImageEmbedding& embedding) {
  if (embedding.backbone_id() != model.backbone_id) {
    throw Error(ErrorKind::kValidation, "embedding from '" + embedding.backbone_id() +
                                            "' given to a model trained on '" +
                                            model.backbone_id + "'");
  }
  if (embedding.dim() != model.dim()) {
    throw Error(ErrorKind::kValidation, "embedding dim " + std::to_string(embedding.dim()) +
                                            " does not match model dim " +
                                            std::to_string(model.dim()));
  }
  ClassPrediction out;
  out.margins.reserve(model.num_classes());
  std::span<const double> x = embedding.values();
  for (std::size_t c = 0; c < model.num_classes(); ++c) {
    double score = model.bias[c];
    for (std::size_t j = 0; j < x.size(); ++j) score += model.weights[c][j] * x[j];
    out.margins.push_back(score);
  }
  out.class_id = 0;
  for (std::size_t c = 1; c < out.margins.size(); ++c) {
    if (out.margins[c] > out.margins[static_cast<std::size_t>(out.class_id)]) {
      out.class_id = static_cast<int>(c);
    }
  }
  out.canonical_text = model.label_space.at(out.class_id).canonical_text;
  return out;
}

json model_to_json(const WeakSupModel& model) {
  json classes = json::array();
  for (const LabelClass& c : model.label_space.classes()) {
    classes.push_back(
        json{{"class_id", c.class_id}, {"canonical_text", c.canonical_text}, {"support", c.support}});
  }
  return json{{"format_version", kModelFormatVersion},
              {"backbone_id", model.backbone_id},
              {"hyperparameters",
               {{"lambda", model.params.lambda},
                {"max_iterations", model.params.max_iterations},
                {"seed", model.params.seed}}},
              {"label_space", std::move(classes)},
              {"weights", model.weights},
              {"bias", model.bias}};
}

WeakSupModel model_from_json(const json& document) {
  try {
    const int version = document.at("format_version").get<int>();
    if (version != kModelFormatVersion) {
      throw Error(ErrorKind::kValidation,
                  "unsupported model format version " + std::to_string(version));
    }
    WeakSupModel model;
    model.backbone_id = document.at("backbone_id").get<std::string>();
    const json& hyper = document.at("hyperparameters");
    model.params.lambda = hyper.at("lambda").get<double>();
    model.params.max_iterations = hyper.at("max_iterations").get<int>();
    model.params.seed = hyper.at("seed").get<std::uint64_t>();
    std::vector<LabelClass> classes;
    for (const json& c : document.at("label_space")) {
      classes.push_back(LabelClass{c.at("class_id").get<int>(),
                                   c.at("canonical_text").get<std::string>(),
                                   c.at("support").get<std::size_t>()});
    }
    model.label_space = LabelSpace(std::move(classes));
    model.weights = document.at("weights").get<std::vector<std::vector<double>>>();
    model.bias = document.at("bias").get<std::vector<double>>();
    if (model.weights.size() != model.label_space.size() ||
        model.bias.size() != model.label_space.size()) {
      throw Error(ErrorKind::kValidation, "model rows do not match the label space");
    }
    for (const auto& row : model.weights) {
      if (row.size() != model.dim()) throw Error(ErrorKind::kValidation, "ragged weight matrix");
      for (double v : row) {
        if (!std::isfinite(v)) throw Error(ErrorKind::kValidation, "non-finite model weight");
      }
    }
    return model;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kValidation, std::string("malformed model: ") + e.what());
  }
}

void save_model(const WeakSupModel& model, const std::filesystem::path& path) {
  write_file(path, model_to_json(model).dump(1) + "\n");
}

WeakSupModel load_model(const std::filesystem::path& path) {
  json document;
  try {
    document = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::kParse, path.string() + ": malformed JSON at byte " +
                                       std::to_string(e.byte), e.byte);
  }
  return model_from_json(document);
}

}  // namespace medifact
