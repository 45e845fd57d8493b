// Copyright 2026 The MediFact Authors
// SPDX-License-Identifier: Apache-2.0

#include "medifact/tfidf.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "medifact/error.hpp"
#include "medifact/text.hpp"

namespace medifact {

double SparseVector::norm() const {
  double sum = 0.0;
  for (const auto& [index, value] : entries) sum += value * value;
  return std::sqrt(sum);
}

double SparseVector::dot(const SparseVector& other) const {
  double sum = 0.0;
  auto a = entries.begin();
  auto b = other.entries.begin();
  while (a != entries.end() && b != other.entries.end()) {
    if (a->first < b->first) {
      ++a;
    } else if (b->first < a->first) {
      ++b;
    } else {
      sum += a->second * b->second;
      ++a;
      ++b;
    }
  }
  return sum;
}

double SparseVector::at(std::uint32_t index) const {
  auto it = std::lower_bound(entries.begin(), entries.end(), index,
                             [](const auto& entry, std::uint32_t i) { return entry.first < i; });
  return it != entries.end() && it->first == index ? it->second : 0.0;
}

double cosine_similarity(const SparseVector& a, const SparseVector& b) {
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::clamp(a.dot(b) / (na * nb), -1.0, 1.0);
}

void TfidfVectorizer::fit(std::span<const std::string> documents) {
  std::map<std::string, std::size_t, std::less<>> df;
  for (const std::string& doc : documents) {
    auto tokens = tokenize(doc, language_, Punctuation::kDrop);
    std::set<std::string> unique(tokens.begin(), tokens.end());
    for (const auto& term : unique) ++df[term];
  }
  vocabulary_.clear();
  idf_.clear();
  const double n = static_cast<double>(documents.size());
  for (const auto& [term, count] : df) {
    vocabulary_.emplace(term, static_cast<std::uint32_t>(idf_.size()));
    idf_.push_back(std::log((1.0 + n) / (1.0 + static_cast<double>(count))) + 1.0);
  }
  fitted_ = true;
}

std::optional<std::uint32_t> TfidfVectorizer::index_of(std::string_view term) const {
  auto it = vocabulary_.find(term);
  if (it == vocabulary_.end()) return std::nullopt;
  return it->second;
}

SparseVector TfidfVectorizer::transform(std::string_view text) const {
  if (!fitted_) throw Error(ErrorKind::kState, "tf-idf vectorizer used before fit");
  std::map<std::uint32_t, double> counts;
  for (const auto& term : tokenize(text, language_, Punctuation::kDrop)) {
    if (auto index = index_of(term)) counts[*index] += 1.0;
  }
  SparseVector out;
  out.entries.reserve(counts.size());
  for (const auto& [index, count] : counts) out.entries.emplace_back(index, count * idf_[index]);
  return out;
}

}  // namespace medifact
