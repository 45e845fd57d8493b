// Copyright 2026 The MediFact Authors
// SPDX-License-Identifier: Apache-2.0

#include "medifact/selection.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <random>

#include <nlohmann/json.hpp>

#include "medifact/error.hpp"
#include "medifact/hashing.hpp"
#include "medifact/text.hpp"

namespace medifact {
namespace {

constexpr std::uint64_t kFnvOffset = 14695981039346656037ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

std::uint64_t fnv1a(std::uint64_t hash, std::string_view bytes) {
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= kFnvPrime;
  }
  return hash;
}

int source_rank(CandidateSource source) {
  switch (source) {
    case CandidateSource::kWeakSup: return 0;
    case CandidateSource::kExtractive: return 1;
    case CandidateSource::kAbstractive: return 2;
  }
  return 3;
}

}  // namespace

std::string_view to_string(CandidateSource source) {
  switch (source) {
    case CandidateSource::kWeakSup: return "weaksup";
    case CandidateSource::kExtractive: return "extractive";
    case CandidateSource::kAbstractive: return "abstractive";
  }
  return "unknown";
}

std::string_view to_string(SelectionMode mode) {
  return mode == SelectionMode::kIndividual ? "individual" : "translated";
}

SelectionMode parse_selection_mode(std::string_view name) {
  if (name == "individual") return SelectionMode::kIndividual;
  if (name == "translated") return SelectionMode::kTranslated;
  throw Error(ErrorKind::kConfig,
              "unknown mode '" + std::string(name) + "' (expected individual or translated)");
}

std::optional<std::vector<std::vector<double>>> TextEncoderProvider::encode_tokens(
    std::string_view, Language) const {
  return std::nullopt;
}

std::vector<double> StubTextEncoder::encode(std::string_view text, Language) const {
  std::vector<double> out(kDim, 0.0);
  if (text.empty()) return out;
  std::vector<std::string> units;
  units.push_back("\x02");
  for (auto& cp : split_code_points(to_lower(text))) units.push_back(std::move(cp));
  units.push_back("\x03");

  std::string seed_bytes(8, '\0');
  for (int i = 0; i < 8; ++i) seed_bytes[i] = static_cast<char>((kSeed >> (8 * i)) & 0xFF);
  const std::uint64_t seeded = fnv1a(kFnvOffset, seed_bytes);

  for (std::size_t i = 0; i + 3 <= units.size(); ++i) {
    const std::string trigram = units[i] + units[i + 1] + units[i + 2];
    const std::uint64_t h = fnv1a(seeded, trigram);
    out[h % kDim] += (h >> 63) ? -1.0 : 1.0;
  }
  return out;
}

EncoderRegistry::EncoderRegistry() : Registry<TextEncoderProvider>("text encoder") {
  add(std::make_shared<StubTextEncoder>());
}

Projection Projection::identity(std::size_t dim) {
  Projection p;
  p.in_dim_ = dim;
  p.out_dim_ = dim;
  return p;
}

Projection Projection::from_matrix(std::vector<std::vector<double>> rows) {
  if (rows.empty() || rows.front().empty()) {
    throw Error(ErrorKind::kConfig, "projection matrix is empty");
  }
  Projection p;
  p.out_dim_ = rows.size();
  p.in_dim_ = rows.front().size();
  p.matrix_.reserve(p.out_dim_ * p.in_dim_);
  for (const auto& row : rows) {
    if (row.size() != p.in_dim_) throw Error(ErrorKind::kConfig, "ragged projection matrix");
    for (double v : row) {
      if (!std::isfinite(v)) throw Error(ErrorKind::kConfig, "non-finite projection entry");
      p.matrix_.push_back(v);
    }
  }
  return p;
}

Projection Projection::seeded(std::size_t in_dim, std::size_t out_dim, std::uint64_t seed) {
  if (in_dim == 0 || out_dim == 0) throw Error(ErrorKind::kConfig, "projection dims must be > 0");
  Projection p;
  p.in_dim_ = in_dim;
  p.out_dim_ = out_dim;
  p.matrix_.resize(in_dim * out_dim);
  std::mt19937_64 rng(seed);
  const double scale = 1.0 / std::sqrt(static_cast<double>(out_dim));
  for (double& v : p.matrix_) v = (rng() >> 63) ? -scale : scale;
  return p;
}

Projection Projection::load(const std::filesystem::path& path) {
  try {
    auto document = nlohmann::json::parse(read_file(path));
    return from_matrix(document.at("matrix").get<std::vector<std::vector<double>>>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kConfig, path.string() + ": " + e.what());
  }
}

std::vector<double> Projection::apply(std::span<const double> input) const {
  if (input.size() != in_dim_) {
    throw Error(ErrorKind::kConfig, "projection expects dim " + std::to_string(in_dim_) +
                                        ", got " + std::to_string(input.size()));
  }
  if (is_identity()) return std::vector<double>(input.begin(), input.end());
  std::vector<double> out(out_dim_, 0.0);
  for (std::size_t r = 0; r < out_dim_; ++r) {
    double acc = 0.0;
    for (std::size_t c = 0; c < in_dim_; ++c) acc += matrix_[r * in_dim_ + c] * input[c];
    out[r] = acc;
  }
  return out;
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorKind::kValidation, "cosine similarity of vectors with dims " +
                                            std::to_string(a.size()) + " and " +
                                            std::to_string(b.size()));
  }
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

void order_candidates(std::vector<Candidate>& candidates) {
  std::stable_sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    return source_rank(a.source) < source_rank(b.source);
  });
}

SelectionEntry select_response(std::span<const double> image,
                               std::span<const Candidate> candidates,
                               const TextEncoderProvider& encoder,
                               const Projection& projection) {
  if (candidates.empty()) throw Error(ErrorKind::kSelection, "no candidates to select from");
  if (projection.out_dim() != encoder.dim()) {
    throw Error(ErrorKind::kConfig, "projection output dim " +
                                        std::to_string(projection.out_dim()) +
                                        " does not match text encoder '" + encoder.id() +
                                        "' dim " + std::to_string(encoder.dim()));
  }
  const std::vector<double> projected = projection.apply(image);
  SelectionEntry best;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const Candidate& c = candidates[i];
    const std::vector<double> text =
        c.embedding ? *c.embedding : encoder.encode(c.text, c.language);
    const double score = cosine_similarity(projected, text);
    if (!best.index || score > best.similarity) {
      best.text = c.text;
      best.similarity = score;
      best.index = i;
    }
  }
  return best;
}

SelectionResult run_individual_mode(const Encounter& encounter,
                                    const std::map<Language, std::vector<Candidate>>& candidates,
                                    const std::set<Language>& participating,
                                    std::span<const double> image,
                                    const TextEncoderProvider& encoder,
                                    const Projection& projection) {
  SelectionResult result;
  for (Language language : kAllLanguages) {
    SelectionEntry entry;
    if (participating.contains(language)) {
      auto it = candidates.find(language);
      if (it == candidates.end()) {
        throw Error(ErrorKind::kConfig, "encounter '" + encounter.encounter_id +
                                            "': no candidate list for participating language " +
                                            std::string(to_string(language)));
      }
      entry = select_response(image, it->second, encoder, projection);
    }
    entry.mode = SelectionMode::kIndividual;
    result.entries[language] = std::move(entry);
  }
  return result;
}

SelectionResult run_translated_mode(const Encounter& encounter, Language pivot,
                                    std::span<const Candidate> pivot_candidates,
                                    std::span<const double> image,
                                    const TextEncoderProvider& encoder,
                                    const Projection& projection,
                                    const TranslationProvider& translator) {
  SelectionResult result;
  SelectionEntry winner = select_response(image, pivot_candidates, encoder, projection);
  winner.mode = SelectionMode::kTranslated;
  for (Language target : kAllLanguages) {
    if (target == pivot) continue;
    SelectionEntry entry;
    entry.mode = SelectionMode::kTranslated;
    entry.similarity = winner.similarity;
    try {
      entry.text = translator.translate(winner.text, pivot, target);
    } catch (const std::exception& e) {
      std::string warning = "encounter '" + encounter.encounter_id + "': translation " +
                            std::string(to_string(pivot)) + "->" +
                            std::string(to_string(target)) + " via '" + translator.id() +
                            "' failed: " + e.what();
      spdlog::warn("{}", warning);
      result.warnings.push_back(std::move(warning));
      entry.text.clear();
      entry.similarity = 0.0;
    }
    result.entries[target] = std::move(entry);
  }
  result.entries[pivot] = std::move(winner);
  return result;
}

}  // namespace medifact
