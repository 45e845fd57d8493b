// Copyright 2026 The MediFact Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MEDIFACT_SELECTION_HPP_
#define MEDIFACT_SELECTION_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "medifact/datamodel.hpp"
#include "medifact/language.hpp"
#include "medifact/registry.hpp"
#include "medifact/translation.hpp"

namespace medifact {

enum class CandidateSource { kWeakSup, kExtractive, kAbstractive };
std::string_view to_string(CandidateSource source);

struct Candidate {
  std::string text;
  Language language = Language::kEn;
  CandidateSource source = CandidateSource::kWeakSup;
  // Precomputed text embedding; encoded on demand when absent.
  std::optional<std::vector<double>> embedding;
};

enum class SelectionMode { kIndividual, kTranslated };
std::string_view to_string(SelectionMode mode);
SelectionMode parse_selection_mode(std::string_view name);

struct SelectionEntry {
  std::string text;
  double similarity = 0.0;
  // Winning candidate; empty for non-participating or translated languages.
  std::optional<std::size_t> index;
  SelectionMode mode = SelectionMode::kIndividual;
};

struct SelectionResult {
  std::map<Language, SelectionEntry> entries;
  std::vector<std::string> warnings;
};

class TextEncoderProvider {
 public:
  virtual ~TextEncoderProvider() = default;

  virtual const std::string& id() const = 0;
  virtual std::size_t dim() const = 0;
  virtual bool concurrency_safe() const = 0;
  virtual std::vector<double> encode(std::string_view text, Language language) const = 0;
  // Per-token vectors for token-matching metrics; nullopt for sentence-level
  // encoders.
  virtual std::optional<std::vector<std::vector<double>>> encode_tokens(
      std::string_view text, Language language) const;
};

/// Signed feature hashing of character trigrams into 64 dims. The text is
/// lowercased and wrapped as "\x02" + text + "\x03"; each code point trigram
/// t adds sign(h) to bucket h mod 64, where h = FNV-1a-64 over the 8
/// little-endian bytes of kSeed followed by the UTF-8 bytes of t, and the
/// sign is - when the top bit of h is set. Empty text encodes to zeros.
class StubTextEncoder final : public TextEncoderProvider {
 public:
  static constexpr std::size_t kDim = 64;
  static constexpr std::uint64_t kSeed = 0x434c495053545542ULL;

  const std::string& id() const override { return id_; }
  std::size_t dim() const override { return kDim; }
  bool concurrency_safe() const override { return true; }
  std::vector<double> encode(std::string_view text, Language language) const override;

 private:
  std::string id_ = "stub";
};

// Registry holding the stub encoder by default.
class EncoderRegistry : public Registry<TextEncoderProvider> {
 public:
  EncoderRegistry();
};

// Linear map from image space to text-encoder space.
class Projection {
 public:
  static Projection identity(std::size_t dim);
  // rows = output dim, each row input-dim long.
  static Projection from_matrix(std::vector<std::vector<double>> rows);
  // Rademacher projection, entries +-1/sqrt(out) drawn from mt19937_64(seed).
  static Projection seeded(std::size_t in_dim, std::size_t out_dim, std::uint64_t seed);
  // JSON file: {"matrix": [[...], ...]}.
  static Projection load(const std::filesystem::path& path);

  std::size_t in_dim() const { return in_dim_; }
  std::size_t out_dim() const { return out_dim_; }
  bool is_identity() const { return matrix_.empty(); }
  std::vector<double> apply(std::span<const double> input) const;

 private:
  std::size_t in_dim_ = 0;
  std::size_t out_dim_ = 0;
  std::vector<double> matrix_;  // out x in, empty for identity
};

/// dot(a, b) / (|a| |b|), clamped to [-1, 1]; 0 when either norm is 0.
/// Throws Error(kValidation) on a dimension mismatch.
double cosine_similarity(std::span<const double> a, std::span<const double> b);

// Stable sort into weaksup, extractive, abstractive order.
void order_candidates(std::vector<Candidate>& candidates);

/// argmax over candidates of cosine(project(image), encode(text)), ties to
/// the lowest index. Throws Error(kSelection) for an empty list and
/// Error(kConfig) when projection and encoder dims disagree.
SelectionEntry select_response(std::span<const double> image,
                               std::span<const Candidate> candidates,
                               const TextEncoderProvider& encoder,
                               const Projection& projection);

/// Independent selection per participating language; the rest get "".
/// Throws Error(kConfig) when a participating language has no list.
SelectionResult run_individual_mode(const Encounter& encounter,
                                    const std::map<Language, std::vector<Candidate>>& candidates,
                                    const std::set<Language>& participating,
                                    std::span<const double> image,
                                    const TextEncoderProvider& encoder,
                                    const Projection& projection);

/// Selects on the pivot list and translates the winner to the other two
/// languages. A failed translation leaves that language "" and logs a warning.
SelectionResult run_translated_mode(const Encounter& encounter, Language pivot,
                                    std::span<const Candidate> pivot_candidates,
                                    std::span<const double> image,
                                    const TextEncoderProvider& encoder,
                                    const Projection& projection,
                                    const TranslationProvider& translator);

}  // namespace medifact

#endif  // MEDIFACT_SELECTION_HPP_
