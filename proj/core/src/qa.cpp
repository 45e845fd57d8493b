// Copyright 2026 The MediFact Authors
// SPDX-License-Identifier: Apache-2.0

#include "medifact/qa.hpp"

#include <algorithm>
#include <numeric>

#include "medifact/error.hpp"
#include "medifact/text.hpp"

namespace medifact {

std::size_t FusedFeature::total_dim() const {
  std::size_t total = 0;
  for (const FeatureSegment& s : segments) total += s.dim;
  return total;
}

std::vector<double> FusedFeature::dense() const {
  std::vector<double> out(total_dim(), 0.0);
  const SparseVector* text_parts[] = {&query_vector, &content_vector};
  for (std::size_t part = 0; part < 2; ++part) {
    for (const auto& [index, value] : text_parts[part]->entries) {
      out[segments[part].offset + index] = value;
    }
  }
  std::copy(image_vector.values().begin(), image_vector.values().end(),
            out.begin() + static_cast<std::ptrdiff_t>(segments[2].offset));
  return out;
}

FusedFeature build_fused_features(const Encounter& encounter, const ImageEmbedding& image,
                                  const TfidfVectorizer& vectorizer) {
  if (!vectorizer.fitted()) {
    throw Error(ErrorKind::kState, "fused features need a fitted tf-idf vectorizer");
  }
  const std::size_t vocab = vectorizer.vocabulary_size();
  return FusedFeature{
      vectorizer.transform(encounter.query_title),
      vectorizer.transform(encounter.query_content),
      image,
      {{"query", 0, vocab}, {"content", vocab, vocab}, {"image", 2 * vocab, image.dim()}},
  };
}

PassageIndex::PassageIndex(std::vector<Passage> corpus, TfidfVectorizer vectorizer)
    : corpus_(std::move(corpus)), vectorizer_(std::move(vectorizer)) {
  if (corpus_.empty()) throw Error(ErrorKind::kRetrieval, "retrieval corpus is empty");
  if (!vectorizer_.fitted()) {
    throw Error(ErrorKind::kState, "passage index needs a fitted tf-idf vectorizer");
  }
  vectors_.reserve(corpus_.size());
  for (const Passage& p : corpus_) vectors_.push_back(vectorizer_.transform(p.text));
}

RankedPassages PassageIndex::query(std::string_view text, std::size_t top_k) const {
  if (top_k == 0) throw Error(ErrorKind::kRetrieval, "top_k must be at least 1");
  const SparseVector q = vectorizer_.transform(text);
  std::vector<double> scores(corpus_.size());
  for (std::size_t i = 0; i < corpus_.size(); ++i) {
    scores[i] = std::clamp(cosine_similarity(q, vectors_[i]), 0.0, 1.0);
  }
  std::vector<std::size_t> order(corpus_.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto better = [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    if (corpus_[a].encounter_id != corpus_[b].encounter_id) {
      return corpus_[a].encounter_id < corpus_[b].encounter_id;
    }
    return a < b;
  };
  const std::size_t k = std::min(top_k, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                    better);
  RankedPassages out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    const Passage& p = corpus_[order[i]];
    out.push_back(RankedPassage{p.text, p.encounter_id, scores[order[i]]});
  }
  return out;
}

RankedPassages extractive_answer(std::string_view query, std::span<const Passage> corpus,
                                 std::size_t top_k, const TfidfVectorizer& vectorizer) {
  return PassageIndex(std::vector<Passage>(corpus.begin(), corpus.end()), vectorizer)
      .query(query, top_k);
}

RankedPassages extractive_answer(std::string_view query, std::span<const Passage> corpus,
                                 std::size_t top_k) {
  if (corpus.empty()) throw Error(ErrorKind::kRetrieval, "retrieval corpus is empty");
  std::vector<std::string> texts;
  texts.reserve(corpus.size());
  for (const Passage& p : corpus) texts.push_back(p.text);
  TfidfVectorizer vectorizer(Language::kEn);
  vectorizer.fit(texts);
  return extractive_answer(query, corpus, top_k, vectorizer);
}

std::string StubGenerator::generate(const GenerationRequest& request) const {
  if (request.passages.empty()) return std::string(kStubFallback);
  return std::string(kStubPrefix) + request.passages.front();
}

std::string FailingGenerator::generate(const GenerationRequest&) const {
  throw Error(ErrorKind::kProvider, "generator 'failing' always fails");
}

GeneratorRegistry::GeneratorRegistry() : Registry<GeneratorProvider>("generator") {
  add(std::make_shared<StubGenerator>());
  add(std::make_shared<FailingGenerator>());
}

std::string abstractive_answer(std::string_view prompt, const FusedFeature& fused,
                               const RankedPassages& passages,
                               const GeneratorProvider& provider) {
  std::vector<std::string> texts;
  texts.reserve(passages.size());
  for (const RankedPassage& p : passages) texts.push_back(p.text);
  std::string raw;
  try {
    raw = provider.generate(GenerationRequest{prompt, texts, &fused});
  } catch (const std::exception& e) {
    throw Error(ErrorKind::kGeneration,
                "generator '" + provider.id() + "' failed: " + e.what());
  }
  return clean_text(raw);
}

}  // namespace medifact
