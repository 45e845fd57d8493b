// Copyright 2026 The MediFact Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MEDIFACT_DATAMODEL_HPP_
#define MEDIFACT_DATAMODEL_HPP_

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "medifact/language.hpp"

namespace medifact {

enum class Credential { kMedicalDoctor, kOtherProvider, kUnknown };

std::string_view to_string(Credential credential);

struct AuthorRecord {
  std::string author_id;
  Credential credential = Credential::kUnknown;

  bool operator==(const AuthorRecord&) const = default;
};

using AuthorTable = std::map<std::string, AuthorRecord, std::less<>>;

struct GoldResponse {
  std::string text;
  std::string author_id;
  // Computed by weight_response; unset until the dataset is weighted.
  std::optional<double> weight = std::nullopt;
  // Human judgment carried by the input file, if any.
  std::optional<double> human_score = std::nullopt;

  bool operator==(const GoldResponse&) const = default;
};

struct Encounter {
  std::string encounter_id;
  std::vector<std::string> image_ids;
  std::string query_title;
  std::string query_content;
  Language language = Language::kEn;
  std::vector<GoldResponse> gold_responses;

  // Title and content joined by one space, skipping empty parts.
  std::string query_text() const;

  bool operator==(const Encounter&) const = default;
};

struct PredictionRecord {
  std::string encounter_id;
  // Absent language is equivalent to the empty string.
  std::map<Language, std::string> responses;

  const std::string& response(Language language) const;

  bool operator==(const PredictionRecord&) const = default;
};

// Maps free-form credential strings from the author CSV onto Credential.
// Keys are matched after trimming and lowercasing; misses map to kUnknown.
class CredentialMap {
 public:
  static CredentialMap defaults();

  void add(std::string_view label, Credential credential);
  Credential lookup(std::string_view label) const;

 private:
  std::map<std::string, Credential, std::less<>> entries_;
};

struct WeightingParams {
  double medical_doctor_factor = 1.0;
  double other_provider_factor = 0.7;
  double unknown_factor = 0.3;
  // L_ref: token count at which a response counts as complete.
  double reference_length = 20.0;

  double factor(Credential credential) const;
  // Throws Error(kConfig) on a non-positive reference length or a factor
  // outside (0, 1].
  void validate() const;
};

// --- Encounter JSON -------------------------------------------------------
//
// Field names of the on-disk format live only in encounter_from_json and
// encounter_to_json.

Encounter encounter_from_json(const nlohmann::json& object, Language language);
nlohmann::json encounter_to_json(const Encounter& encounter);

/// Parses a JSON array of encounter objects. `source` names the input in
/// error messages. Malformed JSON raises Error(kParse) with the byte offset;
/// duplicate ids, duplicate image ids and wrongly typed fields raise
/// Error(kValidation).
std::vector<Encounter> parse_encounters(std::string_view json_text, Language language,
                                        std::string_view source = "<memory>");
std::vector<Encounter> load_encounters(const std::filesystem::path& path, Language language);
nlohmann::json encounters_to_json(std::span<const Encounter> encounters);

// --- Author CSV -----------------------------------------------------------

AuthorTable parse_authors(std::string_view csv_text, const CredentialMap& credentials,
                          std::string_view source = "<memory>");
AuthorTable load_authors(const std::filesystem::path& path,
                         const CredentialMap& credentials = CredentialMap::defaults());

// --- Cleaning and weighting -----------------------------------------------

// Applies clean_text to every text field of the encounter.
void clean_encounter(Encounter& encounter);

/// credential_factor(author) x min(1, tokens / reference_length), clamped
/// to [0, 1]. Expects already cleaned text.
double weight_response(const GoldResponse& response, const AuthorRecord& author,
                       const WeightingParams& params, Language language = Language::kEn);

/// Fills GoldResponse::weight for every response. Authors missing from the
/// table count as Credential::kUnknown. With `use_human_scores`, a response
/// carrying a human score takes that score (clamped to [0, 1]) instead.
/// Returns the number of responses whose author was not in the table.
std::size_t weight_encounter(Encounter& encounter, const AuthorTable& authors,
                             const WeightingParams& params, bool use_human_scores = false);

// --- Prediction JSON ------------------------------------------------------

nlohmann::json predictions_to_json(std::span<const PredictionRecord> predictions);
std::vector<PredictionRecord> predictions_from_json(const nlohmann::json& document);
std::vector<PredictionRecord> load_predictions(const std::filesystem::path& path);

// Every way `document` departs from the prediction file schema. Empty when valid.
std::vector<std::string> validate_prediction_schema(const nlohmann::json& document);

}  // namespace medifact

#endif  // MEDIFACT_DATAMODEL_HPP_
