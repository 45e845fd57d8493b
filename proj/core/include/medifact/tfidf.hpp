// Copyright 2026 The MediFact Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MEDIFACT_TFIDF_HPP_
#define MEDIFACT_TFIDF_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "medifact/language.hpp"

namespace medifact {

// Sorted (index, value) pairs with unique indices.
struct SparseVector {
  std::vector<std::pair<std::uint32_t, double>> entries;

  bool empty() const { return entries.empty(); }
  double norm() const;
  double dot(const SparseVector& other) const;
  double at(std::uint32_t index) const;

  bool operator==(const SparseVector&) const = default;
};

double cosine_similarity(const SparseVector& a, const SparseVector& b);

/// Raw term count times smoothed idf, idf(t) = ln((1 + N) / (1 + df(t))) + 1.
/// Punctuation tokens are ignored; terms unseen at fit time are dropped.
class TfidfVectorizer {
 public:
  TfidfVectorizer() = default;
  explicit TfidfVectorizer(Language language) : language_(language) {}

  void fit(std::span<const std::string> documents);
  bool fitted() const { return fitted_; }

  // Throws Error(kState) before fit().
  SparseVector transform(std::string_view text) const;

  std::size_t vocabulary_size() const { return vocabulary_.size(); }
  std::optional<std::uint32_t> index_of(std::string_view term) const;
  double idf(std::uint32_t index) const { return idf_.at(index); }
  Language language() const { return language_; }

 private:
  Language language_ = Language::kEn;
  bool fitted_ = false;
  std::map<std::string, std::uint32_t, std::less<>> vocabulary_;
  std::vector<double> idf_;
};

}  // namespace medifact

#endif  // MEDIFACT_TFIDF_HPP_
