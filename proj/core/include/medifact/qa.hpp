// Copyright 2026 The MediFact Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MEDIFACT_QA_HPP_
#define MEDIFACT_QA_HPP_

#include <chrono>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "medifact/datamodel.hpp"
#include "medifact/registry.hpp"
#include "medifact/tfidf.hpp"
#include "medifact/vision.hpp"

namespace medifact {

struct FeatureSegment {
  std::string name;
  std::size_t offset = 0;
  std::size_t dim = 0;
};

// Query, content and image parts of one encounter, laid out back to back.
struct FusedFeature {
  SparseVector query_vector;
  SparseVector content_vector;
  ImageEmbedding image_vector;
  std::vector<FeatureSegment> segments;  // query, content, image

  std::size_t total_dim() const;
  // Concatenated dense vector, total_dim() long.
  std::vector<double> dense() const;
};

// Throws Error(kState) if the vectorizer has not been fit.
FusedFeature build_fused_features(const Encounter& encounter, const ImageEmbedding& image,
                                  const TfidfVectorizer& vectorizer);

struct Passage {
  std::string text;
  std::string encounter_id;
};

struct RankedPassage {
  std::string text;
  std::string encounter_id;
  double score = 0.0;

  bool operator==(const RankedPassage&) const = default;
};

// Score descending, ties by encounter_id ascending.
using RankedPassages = std::vector<RankedPassage>;

// tf-idf index over a fixed passage corpus. Scores depend only on the query,
// the passage and the vectorizer, so adding passages never reorders others.
class PassageIndex {
 public:
  // Throws Error(kRetrieval) on an empty corpus, Error(kState) on an unfit
  // vectorizer.
  PassageIndex(std::vector<Passage> corpus, TfidfVectorizer vectorizer);

  RankedPassages query(std::string_view text, std::size_t top_k) const;
  std::size_t size() const { return corpus_.size(); }
  const TfidfVectorizer& vectorizer() const { return vectorizer_; }

 private:
  std::vector<Passage> corpus_;
  std::vector<SparseVector> vectors_;
  TfidfVectorizer vectorizer_;
};

/// Cosine ranking of `corpus` against `query` with a vectorizer fit on the
/// corpus itself. At most `top_k` results. Throws Error(kRetrieval) on an
/// empty corpus or top_k == 0.
RankedPassages extractive_answer(std::string_view query, std::span<const Passage> corpus,
                                 std::size_t top_k);
// Same ranking with a vectorizer fit elsewhere (the training corpus).
RankedPassages extractive_answer(std::string_view query, std::span<const Passage> corpus,
                                 std::size_t top_k, const TfidfVectorizer& vectorizer);

struct GenerationRequest {
  std::string_view prompt;
  std::span<const std::string> passages;  // best first
  const FusedFeature* fused = nullptr;
};

// Abstractive answer generator plug-in.
class GeneratorProvider {
 public:
  virtual ~GeneratorProvider() = default;

  virtual const std::string& id() const = 0;
  virtual bool deterministic() const = 0;
  virtual bool concurrency_safe() const = 0;
  // May throw; callers wrap failures into Error(kGeneration).
  virtual std::string generate(const GenerationRequest& request) const = 0;
};

// Returns kStubPrefix + top passage, or kStubFallback when there are no passages.
class StubGenerator final : public GeneratorProvider {
 public:
  static constexpr std::string_view kStubPrefix = "Based on similar cases: ";
  static constexpr std::string_view kStubFallback =
      "No similar cases were found. Please consult a dermatologist for an in-person "
      "assessment.";

  const std::string& id() const override { return id_; }
  bool deterministic() const override { return true; }
  bool concurrency_safe() const override { return true; }
  std::string generate(const GenerationRequest& request) const override;

 private:
  std::string id_ = "stub";
};

// Always throws. Used for fault injection.
class FailingGenerator final : public GeneratorProvider {
 public:
  const std::string& id() const override { return id_; }
  bool deterministic() const override { return true; }
  bool concurrency_safe() const override { return true; }
  std::string generate(const GenerationRequest& request) const override;

 private:
  std::string id_ = "failing";
};

struct HttpEndpoint {
  std::string url;  // scheme://host[:port]/path, http only
  std::chrono::milliseconds timeout{10000};
  int retries = 2;
  std::string api_key;
};

/// POSTs {"prompt": ..., "passages": [...]} as JSON and expects {"text": ...}
/// back. Any transport error, non-200 status or malformed body after the last
/// retry is thrown as Error(kProvider).
class HttpGenerator final : public GeneratorProvider {
 public:
  HttpGenerator(std::string id, HttpEndpoint endpoint);

  const std::string& id() const override { return id_; }
  bool deterministic() const override { return false; }
  bool concurrency_safe() const override { return true; }
  std::string generate(const GenerationRequest& request) const override;

 private:
  std::string id_;
  HttpEndpoint endpoint_;
};

// Registry holding the stub and failing generators by default.
class GeneratorRegistry : public Registry<GeneratorProvider> {
 public:
  GeneratorRegistry();
};

/// Provider output passed through clean_text. Provider exceptions become
/// Error(kGeneration) naming the provider id.
std::string abstractive_answer(std::string_view prompt, const FusedFeature& fused,
                               const RankedPassages& passages,
                               const GeneratorProvider& provider);

}  // namespace medifact

#endif  // MEDIFACT_QA_HPP_
