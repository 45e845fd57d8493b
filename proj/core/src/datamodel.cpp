// Copyright 2026 The MediFact Authors
// SPDX-License-Identifier: Apache-2.0

#include "medifact/datamodel.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "csv.hpp"
#include "medifact/error.hpp"
#include "medifact/hashing.hpp"
#include "medifact/text.hpp"

namespace medifact {
namespace {

using nlohmann::json;

std::string trim_lower(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return to_lower(s);
}

std::string context(std::string_view source, std::size_t index) {
  return std::string(source) + " record " + std::to_string(index);
}

// Missing or null -> "", anything but a string -> validation error.
std::string optional_string(const json& object, const char* key, const std::string& where) {
  auto it = object.find(key);
  if (it == object.end() || it->is_null()) return {};
  if (!it->is_string()) {
    throw Error(ErrorKind::kValidation, where + ": field '" + key + "' must be a string");
  }
  return it->get<std::string>();
}

std::optional<double> optional_number(const json& object, const char* key,
                                      const std::string& where) {
  auto it = object.find(key);
  if (it == object.end() || it->is_null()) return std::nullopt;
  if (!it->is_number()) {
    throw Error(ErrorKind::kValidation, where + ": field '" + key + "' must be a number");
  }
  return it->get<double>();
}

}  // namespace

std::string_view to_string(Credential credential) {
  switch (credential) {
    case Credential::kMedicalDoctor: return "medical_doctor";
    case Credential::kOtherProvider: return "other_provider";
    case Credential::kUnknown: return "unknown";
  }
  return "unknown";
}

std::string Encounter::query_text() const {
  if (query_title.empty()) return query_content;
  if (query_content.empty()) return query_title;
  return query_title + " " + query_content;
}

const std::string& PredictionRecord::response(Language language) const {
  static const std::string kEmpty;
  auto it = responses.find(language);
  return it == responses.end() ? kEmpty : it->second;
}

CredentialMap CredentialMap::defaults() {
  CredentialMap map;
  for (const char* label : {"medical doctor", "medical_doctor", "md", "m.d.", "physician",
                            "doctor", "dermatologist"}) {
    map.add(label, Credential::kMedicalDoctor);
  }
  for (const char* label : {"other provider", "other_provider", "nurse practitioner",
                            "nurse", "physician assistant", "pa", "np", "pharmacist"}) {
    map.add(label, Credential::kOtherProvider);
  }
  for (const char* label : {"unknown", "patient", "layperson", ""}) {
    map.add(label, Credential::kUnknown);
  }
  return map;
}

void CredentialMap::add(std::string_view label, Credential credential) {
  entries_[trim_lower(label)] = credential;
}

Credential CredentialMap::lookup(std::string_view label) const {
  auto it = entries_.find(trim_lower(label));
  return it == entries_.end() ? Credential::kUnknown : it->second;
}

double WeightingParams::factor(Credential credential) const {
  switch (credential) {
    case Credential::kMedicalDoctor: return medical_doctor_factor;
    case Credential::kOtherProvider: return other_provider_factor;
    case Credential::kUnknown: return unknown_factor;
  }
  return unknown_factor;
}

void WeightingParams::validate() const {
  if (!(reference_length > 0.0)) {
    throw Error(ErrorKind::kConfig, "weighting: reference_length must be positive");
  }
  for (double f : {medical_doctor_factor, other_provider_factor, unknown_factor}) {
    if (!(f > 0.0 && f <= 1.0)) {
      throw Error(ErrorKind::kConfig, "weighting: credential factors must lie in (0, 1]");
    }
  }
}

Encounter encounter_from_json(const json& object, Language language) {
  if (!object.is_object()) {
    throw Error(ErrorKind::kValidation, "encounter must be a JSON object");
  }
  Encounter e;
  e.language = language;
  e.encounter_id = optional_string(object, "encounter_id", "encounter");
  const std::string where = "encounter '" + e.encounter_id + "'";
  if (e.encounter_id.empty()) {
    throw Error(ErrorKind::kValidation, "encounter_id missing or empty");
  }
  if (auto it = object.find("language"); it != object.end() && it->is_string()) {
    if (parse_language(it->get<std::string>()) != language) {
      throw Error(ErrorKind::kValidation,
                  where + ": language field disagrees with the requested language");
    }
  }
  if (auto it = object.find("image_ids"); it != object.end() && !it->is_null()) {
    if (!it->is_array()) {
      throw Error(ErrorKind::kValidation, where + ": image_ids must be an array");
    }
    std::set<std::string> seen;
    for (const json& id : *it) {
      if (!id.is_string()) {
        throw Error(ErrorKind::kValidation, where + ": image ids must be strings");
      }
      std::string value = id.get<std::string>();
      if (!seen.insert(value).second) {
        throw Error(ErrorKind::kValidation, where + ": duplicate image id '" + value + "'");
      }
      e.image_ids.push_back(std::move(value));
    }
  }
  e.query_title = optional_string(object, "query_title", where);
  e.query_content = optional_string(object, "query_content", where);
  if (auto it = object.find("responses"); it != object.end() && !it->is_null()) {
    if (!it->is_array()) {
      throw Error(ErrorKind::kValidation, where + ": responses must be an array");
    }
    for (const json& r : *it) {
      if (!r.is_object()) {
        throw Error(ErrorKind::kValidation, where + ": each response must be an object");
      }
      GoldResponse g;
      g.text = optional_string(r, "text", where);
      g.author_id = optional_string(r, "author_id", where);
      g.human_score = optional_number(r, "score", where);
      g.weight = optional_number(r, "weight", where);
      e.gold_responses.push_back(std::move(g));
    }
  }
  return e;
}

json encounter_to_json(const Encounter& e) {
  json responses = json::array();
  for (const GoldResponse& g : e.gold_responses) {
    json r = {{"text", g.text}, {"author_id", g.author_id}};
    if (g.human_score) r["score"] = *g.human_score;
    if (g.weight) r["weight"] = *g.weight;
    responses.push_back(std::move(r));
  }
  return json{{"encounter_id", e.encounter_id},
              {"language", to_string(e.language)},
              {"image_ids", e.image_ids},
              {"query_title", e.query_title},
              {"query_content", e.query_content},
              {"responses", std::move(responses)}};
}

std::vector<Encounter> parse_encounters(std::string_view json_text, Language language,
                                        std::string_view source) {
  json document;
  try {
    document = json::parse(json_text);
  } catch (const json::parse_error& e) {
    std::ostringstream msg;
    msg << source << ": malformed JSON at byte " << e.byte << ": " << e.what();
    throw Error(ErrorKind::kParse, msg.str(), e.byte);
  }
  if (!document.is_array()) {
    throw Error(ErrorKind::kValidation,
                std::string(source) + ": expected a JSON array of encounters");
  }
  std::vector<Encounter> out;
  out.reserve(document.size());
  std::set<std::string> ids;
  for (std::size_t i = 0; i < document.size(); ++i) {
    Encounter e;
    try {
      e = encounter_from_json(document[i], language);
    } catch (const Error& err) {
      throw Error(err.kind(), context(source, i) + ": " + err.what());
    }
    if (!ids.insert(e.encounter_id).second) {
      throw Error(ErrorKind::kValidation,
                  std::string(source) + ": duplicate encounter_id '" + e.encounter_id + "'");
    }
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<Encounter> load_encounters(const std::filesystem::path& path, Language language) {
  return parse_encounters(read_file(path), language, path.string());
}

json encounters_to_json(std::span<const Encounter> encounters) {
  json out = json::array();
  for (const Encounter& e : encounters) out.push_back(encounter_to_json(e));
  return out;
}

AuthorTable parse_authors(std::string_view csv_text, const CredentialMap& credentials,
                          std::string_view source) {
  auto rows = csv::parse(csv_text);
  if (rows.empty()) {
    throw Error(ErrorKind::kSchema, std::string(source) + ": missing header row");
  }
  std::optional<std::size_t> id_col;
  std::optional<std::size_t> cred_col;
  for (std::size_t i = 0; i < rows.front().size(); ++i) {
    const std::string name = trim_lower(rows.front()[i]);
    if (name == "author_id") id_col = i;
    if (name == "credential") cred_col = i;
  }
  if (!id_col || !cred_col) {
    throw Error(ErrorKind::kSchema, std::string(source) +
                                        ": header must contain author_id and credential columns");
  }
  AuthorTable table;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    auto cell = [&](std::size_t col) { return col < row.size() ? row[col] : std::string(); };
    std::string id = clean_text(cell(*id_col));
    if (id.empty()) {
      throw Error(ErrorKind::kValidation,
                  std::string(source) + " row " + std::to_string(r) + ": empty author_id");
    }
    AuthorRecord record{id, credentials.lookup(cell(*cred_col))};
    if (!table.emplace(id, std::move(record)).second) {
      throw Error(ErrorKind::kValidation,
                  std::string(source) + ": duplicate author_id '" + id + "'");
    }
  }
  return table;
}

AuthorTable load_authors(const std::filesystem::path& path, const CredentialMap& credentials) {
  return parse_authors(read_file(path), credentials, path.string());
}

void clean_encounter(Encounter& e) {
  e.query_title = clean_text(e.query_title);
  e.query_content = clean_text(e.query_content);
  for (GoldResponse& g : e.gold_responses) {
    g.text = clean_text(g.text);
    g.author_id = clean_text(g.author_id);
  }
}

double weight_response(const GoldResponse& response, const AuthorRecord& author,
                       const WeightingParams& params, Language language) {
  params.validate();
  const double tokens = static_cast<double>(count_completeness_tokens(response.text, language));
  const double completeness = std::min(1.0, tokens / params.reference_length);
  return std::clamp(params.factor(author.credential) * completeness, 0.0, 1.0);
}

std::size_t weight_encounter(Encounter& e, const AuthorTable& authors,
                             const WeightingParams& params, bool use_human_scores) {
  std::size_t missing = 0;
  for (GoldResponse& g : e.gold_responses) {
    if (use_human_scores && g.human_score) {
      g.weight = g.text.empty() ? 0.0 : std::clamp(*g.human_score, 0.0, 1.0);
      continue;
    }
    auto it = authors.find(g.author_id);
    AuthorRecord author{g.author_id, Credential::kUnknown};
    if (it == authors.end()) {
      ++missing;
    } else {
      author = it->second;
    }
    g.weight = weight_response(g, author, params, e.language);
  }
  return missing;
}

json predictions_to_json(std::span<const PredictionRecord> predictions) {
  json out = json::array();
  for (const PredictionRecord& p : predictions) {
    json responses = json::object();
    for (Language l : kAllLanguages) responses[std::string(to_string(l))] = p.response(l);
    out.push_back(json{{"encounter_id", p.encounter_id}, {"responses", std::move(responses)}});
  }
  return out;
}

std::vector<std::string> validate_prediction_schema(const json& document) {
  std::vector<std::string> problems;
  if (!document.is_array()) {
    problems.push_back("top level must be an array");
    return problems;
  }
  std::set<std::string> ids;
  for (std::size_t i = 0; i < document.size(); ++i) {
    const json& item = document[i];
    const std::string where = "record " + std::to_string(i);
    if (!item.is_object()) {
      problems.push_back(where + ": must be an object");
      continue;
    }
    for (const auto& [key, value] : item.items()) {
      if (key != "encounter_id" && key != "responses") {
        problems.push_back(where + ": unexpected key '" + key + "'");
      }
    }
    auto id = item.find("encounter_id");
    if (id == item.end() || !id->is_string() || id->get<std::string>().empty()) {
      problems.push_back(where + ": encounter_id must be a non-empty string");
    } else if (!ids.insert(id->get<std::string>()).second) {
      problems.push_back(where + ": duplicate encounter_id '" + id->get<std::string>() + "'");
    }
    auto responses = item.find("responses");
    if (responses == item.end() || !responses->is_object()) {
      problems.push_back(where + ": responses must be an object");
      continue;
    }
    for (const auto& [key, value] : responses->items()) {
      if (key != "en" && key != "zh" && key != "es") {
        problems.push_back(where + ": unknown language key '" + key + "'");
      }
      if (!value.is_string()) {
        problems.push_back(where + ": response for '" + key + "' must be a string");
      }
    }
  }
  return problems;
}

std::vector<PredictionRecord> predictions_from_json(const json& document) {
  if (auto problems = validate_prediction_schema(document); !problems.empty()) {
    std::string msg = "prediction file does not match the schema:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw Error(ErrorKind::kSchema, msg);
  }
  std::vector<PredictionRecord> out;
  for (const json& item : document) {
    PredictionRecord p;
    p.encounter_id = item.at("encounter_id").get<std::string>();
    for (const auto& [key, value] : item.at("responses").items()) {
      p.responses[parse_language(key)] = value.get<std::string>();
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<PredictionRecord> load_predictions(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  json document;
  try {
    document = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::kParse,
                path.string() + ": malformed JSON at byte " + std::to_string(e.byte), e.byte);
  }
  return predictions_from_json(document);
}

}  // namespace medifact
