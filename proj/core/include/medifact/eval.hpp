// Copyright 2026 The MediFact Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MEDIFACT_EVAL_HPP_
#define MEDIFACT_EVAL_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "medifact/datamodel.hpp"
#include "medifact/language.hpp"
#include "medifact/selection.hpp"

namespace medifact {

struct WeightedReference {
  std::string text;
  double weight = 0.0;
};

// tokenize() with punctuation kept: lowercased words and punctuation for
// en/es, characters for zh.
std::vector<std::string> tokenize_for_bleu(std::string_view text, Language language);

// Sufficient statistics of weighted BLEU for one or more sentences.
struct BleuStats {
  std::vector<double> credit;  // per order: sum of clipped count x max weight
  std::vector<double> total;   // per order: hypothesis n-gram count
  double hypothesis_length = 0.0;
  double reference_length = 0.0;  // closest reference length, ties to shorter

  explicit BleuStats(int max_n = 4);
  BleuStats& operator+=(const BleuStats& other);
  int max_n() const { return static_cast<int>(credit.size()); }
};

/// Statistics of one hypothesis against weighted references. References with
/// weight 0 still clip counts and compete for the closest length but earn no
/// credit. Throws Error(kMetric) when no reference has positive weight and
/// Error(kValidation) when max_n < 1 or a weight leaves [0, 1].
BleuStats delta_bleu_stats(std::string_view hypothesis,
                           std::span<const WeightedReference> references, Language language,
                           int max_n = 4);

/// Geometric mean of the per-order precisions times the brevity penalty,
/// x100. Precisions of orders n >= 2 are floored at 1 / (total + 1), which
/// is the add-one value for zero credit. Zero unigram credit or an empty
/// hypothesis scores 0.
double bleu_score(const BleuStats& stats);

double delta_bleu(std::string_view hypothesis, std::span<const WeightedReference> references,
                  Language language, int max_n = 4);

/// Max over references of a similarity in [0, 1]. Token-level encoders use
/// greedy-matching F1 (floored at 0); sentence encoders use (cosine + 1) / 2.
/// An empty hypothesis scores 0. Encoder exceptions become Error(kMetric).
double bert_score(std::string_view hypothesis, std::span<const WeightedReference> references,
                  Language language, const TextEncoderProvider& embedder);

enum class BleuAggregation { kCorpus, kSentence };

struct MetricParams {
  int max_n = 4;
  BleuAggregation aggregation = BleuAggregation::kCorpus;
};

struct LanguageScores {
  double deltableu = 0.0;
  double bertscore = 0.0;
  std::size_t n_instances = 0;
  std::size_t n_empty = 0;
  std::size_t n_unscorable = 0;         // gold without a positively weighted response
  std::size_t n_bertscore_failures = 0;  // excluded from the bertscore mean

  bool operator==(const LanguageScores&) const = default;
};

struct RunMetadata {
  std::string model;  // row label, e.g. "stub-Individual"
  std::string mode;
  std::string backbone_id;
  std::map<std::string, std::string> providers;
  std::uint64_t seed = 0;
  std::string timestamp;

  bool operator==(const RunMetadata&) const = default;
};

struct EvalReport {
  std::map<Language, LanguageScores> languages;
  RunMetadata metadata;

  bool operator==(const EvalReport&) const = default;
};

struct EvalConfig {
  std::vector<Language> languages;
  MetricParams metric;
  const TextEncoderProvider* embedder = nullptr;  // required
};

// Gold references of one encounter: cleaned texts with their weights.
std::vector<WeightedReference> references_of(const Encounter& encounter);

/// Scores predictions per configured language against weighted gold.
/// Instances are folded in encounter_id order. Empty predictions count as
/// score-0 instances. Throws Error(kValidation) listing prediction ids
/// missing from the gold of any configured language, or duplicated.
EvalReport evaluate_run(std::span<const PredictionRecord> predictions,
                        const std::map<Language, std::vector<Encounter>>& gold,
                        const EvalConfig& config, RunMetadata metadata = {});

nlohmann::json report_to_json(const EvalReport& report);
EvalReport report_from_json(const nlohmann::json& document);

// Aligned text table: one row per report, deltaBLEU and BERTScore columns per
// language.
std::string format_report_table(std::span<const EvalReport> reports);

}  // namespace medifact

#endif  // MEDIFACT_EVAL_HPP_
