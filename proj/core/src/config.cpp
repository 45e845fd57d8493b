// Copyright 2026 The MediFact Authors
// SPDX-License-Identifier: Apache-2.0

#include "medifact/config.hpp"

#include <set>

#include "medifact/error.hpp"
#include "medifact/hashing.hpp"

namespace medifact {
namespace {

using nlohmann::json;

Credential parse_credential(const std::string& name) {
  if (name == "medical_doctor") return Credential::kMedicalDoctor;
  if (name == "other_provider") return Credential::kOtherProvider;
  if (name == "unknown") return Credential::kUnknown;
  throw Error(ErrorKind::kConfig, "unknown credential class '" + name + "'");
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& value) {
  if (value.empty()) return {};
  std::filesystem::path p(value);
  return p.is_absolute() ? p : (base / p).lexically_normal();
}

std::map<Language, std::filesystem::path> language_paths(const json& object,
                                                         const std::filesystem::path& base) {
  std::map<Language, std::filesystem::path> out;
  for (const auto& [key, value] : object.items()) {
    out[parse_language(key)] = resolve(base, value.get<std::string>());
  }
  return out;
}

HttpEndpoint parse_endpoint(const json& object) {
  HttpEndpoint endpoint;
  endpoint.url = object.at("url").get<std::string>();
  endpoint.timeout = std::chrono::milliseconds(object.value("timeout_ms", 10000));
  endpoint.retries = object.value("retries", 2);
  endpoint.api_key = object.value("api_key", std::string());
  if (endpoint.timeout.count() <= 0 || endpoint.retries < 0) {
    throw Error(ErrorKind::kConfig, "http provider needs timeout_ms > 0 and retries >= 0");
  }
  return endpoint;
}

json endpoint_json(const HttpEndpoint& e) {
  // Snapshots omit the api key.
  return json{{"url", e.url}, {"timeout_ms", e.timeout.count()}, {"retries", e.retries}};
}

json language_paths_json(const std::map<Language, std::filesystem::path>& paths) {
  json out = json::object();
  for (const auto& [language, path] : paths) {
    out[std::string(to_string(language))] = path.generic_string();
  }
  return out;
}

}  // namespace

std::string PipelineConfig::effective_selection_backbone() const {
  return selection_backbone.empty() ? backbone : selection_backbone;
}

CredentialMap PipelineConfig::credential_map() const {
  CredentialMap map = CredentialMap::defaults();
  for (const auto& [label, credential] : extra_credentials) map.add(label, credential);
  return map;
}

void PipelineConfig::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::kConfig, msg); };
  if (languages.empty()) fail("at least one participating language is required");
  if (std::set<Language>(languages.begin(), languages.end()).size() != languages.size()) {
    fail("participating languages repeat");
  }
  if (mode == SelectionMode::kTranslated && !pivot) fail("translated mode requires a pivot");
  if (authors.empty()) fail("paths.authors is required");
  if (output_dir.empty()) fail("paths.output is required");
  if (backbone.empty()) fail("backbone id is empty");
  std::set<Language> needed(languages.begin(), languages.end());
  if (pivot) needed.insert(*pivot);
  for (Language language : needed) {
    if (!train_encounters.contains(language)) {
      fail("paths.train lacks an encounter file for " + std::string(to_string(language)));
    }
  }
  weighting.validate();
  if (!(training.lambda > 0.0)) fail("training.lambda must be positive");
  if (training.max_iterations < 1) fail("training.max_iterations must be at least 1");
  if (generation.weaksup_top_n < 1) fail("generation.weaksup_top_n must be at least 1");
  if (generation.extractive_top_k < 1) fail("generation.extractive_top_k must be at least 1");
  if (metrics.max_n < 1) fail("metrics.max_n must be at least 1");
  std::set<std::string> ids{"stub"};
  for (const BackboneSpec& spec : backbones) {
    if (spec.id.empty() || !ids.insert(spec.id).second) {
      fail("backbone ids must be non-empty and unique (and not 'stub')");
    }
  }
}

json PipelineConfig::to_json() const {
  json backbone_list = json::array();
  for (const BackboneSpec& spec : backbones) {
    backbone_list.push_back({{"id", spec.id}, {"features", spec.features.generic_string()}});
  }
  json providers_json = {{"encoder", providers.encoder},
                         {"translator", providers.translator},
                         {"generator", providers.generator},
                         {"embedder", providers.embedder}};
  if (providers.http_translator) {
    providers_json["http_translator"] = endpoint_json(*providers.http_translator);
  }
  if (providers.http_generator) {
    providers_json["http_generator"] = endpoint_json(*providers.http_generator);
  }
  json language_list = json::array();
  for (Language language : languages) language_list.push_back(to_string(language));
  json credentials = json::object();
  for (const auto& [label, credential] : extra_credentials) credentials[label] = to_string(credential);

  return json{
      {"paths",
       {{"train", language_paths_json(train_encounters)},
        {"test", language_paths_json(test_encounters)},
        {"authors", authors.generic_string()},
        {"images", image_dir.generic_string()},
        {"output", output_dir.generic_string()}}},
      {"backbone", backbone},
      {"selection_backbone", effective_selection_backbone()},
      {"backbones", std::move(backbone_list)},
      {"projection", projection},
      {"providers", std::move(providers_json)},
      {"mode", to_string(mode)},
      {"pivot", pivot ? json(to_string(*pivot)) : json(nullptr)},
      {"languages", std::move(language_list)},
      {"weighting",
       {{"credential_factors",
         {{"medical_doctor", weighting.medical_doctor_factor},
          {"other_provider", weighting.other_provider_factor},
          {"unknown", weighting.unknown_factor}}},
        {"reference_length", weighting.reference_length},
        {"credentials", std::move(credentials)},
        {"use_human_scores", use_human_scores}}},
      {"training", {{"lambda", training.lambda}, {"max_iterations", training.max_iterations}}},
      {"generation",
       {{"weaksup_top_n", generation.weaksup_top_n},
        {"extractive_top_k", generation.extractive_top_k}}},
      {"metrics",
       {{"max_n", metrics.max_n},
        {"aggregation", metrics.aggregation == BleuAggregation::kCorpus ? "corpus" : "sentence"}}},
      {"seed", seed},
      {"timestamp", timestamp},
  };
}

PipelineConfig parse_config(const json& document, const std::filesystem::path& base_dir) {
  if (!document.is_object()) throw Error(ErrorKind::kConfig, "config must be a JSON object");
  PipelineConfig config;
  try {
    const json& paths = document.at("paths");
    config.train_encounters = language_paths(paths.at("train"), base_dir);
    if (paths.contains("test")) {
      config.test_encounters = language_paths(paths.at("test"), base_dir);
    }
    for (const auto& [language, path] : config.train_encounters) {
      config.test_encounters.try_emplace(language, path);
    }
    config.authors = resolve(base_dir, paths.at("authors").get<std::string>());
    config.image_dir = resolve(base_dir, paths.value("images", std::string(".")));
    config.output_dir = resolve(base_dir, paths.at("output").get<std::string>());

    config.backbone = document.value("backbone", std::string("stub"));
    config.selection_backbone = document.value("selection_backbone", std::string());
    if (auto it = document.find("backbones"); it != document.end()) {
      for (const json& spec : *it) {
        config.backbones.push_back(
            {spec.at("id").get<std::string>(),
             resolve(base_dir, spec.at("features").get<std::string>())});
      }
    }
    const std::string projection = document.value("projection", std::string("identity"));
    config.projection = (projection == "identity" || projection == "seeded")
                            ? projection
                            : resolve(base_dir, projection).generic_string();

    if (auto it = document.find("providers"); it != document.end()) {
      const json& p = *it;
      config.providers.encoder = p.value("encoder", config.providers.encoder);
      config.providers.translator = p.value("translator", config.providers.translator);
      config.providers.generator = p.value("generator", config.providers.generator);
      config.providers.embedder = p.value("embedder", config.providers.embedder);
      if (p.contains("http_translator")) {
        config.providers.http_translator = parse_endpoint(p.at("http_translator"));
      }
      if (p.contains("http_generator")) {
        config.providers.http_generator = parse_endpoint(p.at("http_generator"));
      }
    }

    config.mode = parse_selection_mode(document.value("mode", std::string("individual")));
    if (auto it = document.find("pivot"); it != document.end() && !it->is_null()) {
      config.pivot = parse_language(it->get<std::string>());
    }
    if (auto it = document.find("languages"); it != document.end()) {
      for (const json& code : *it) config.languages.push_back(parse_language(code.get<std::string>()));
    } else {
      config.languages.assign(kAllLanguages.begin(), kAllLanguages.end());
    }

    if (auto it = document.find("weighting"); it != document.end()) {
      const json& w = *it;
      if (auto f = w.find("credential_factors"); f != w.end()) {
        config.weighting.medical_doctor_factor =
            f->value("medical_doctor", config.weighting.medical_doctor_factor);
        config.weighting.other_provider_factor =
            f->value("other_provider", config.weighting.other_provider_factor);
        config.weighting.unknown_factor = f->value("unknown", config.weighting.unknown_factor);
      }
      config.weighting.reference_length =
          w.value("reference_length", config.weighting.reference_length);
      if (auto c = w.find("credentials"); c != w.end()) {
        for (const auto& [label, name] : c->items()) {
          config.extra_credentials[label] = parse_credential(name.get<std::string>());
        }
      }
      config.use_human_scores = w.value("use_human_scores", false);
    }
    if (auto it = document.find("training"); it != document.end()) {
      config.training.lambda = it->value("lambda", config.training.lambda);
      config.training.max_iterations = it->value("max_iterations", config.training.max_iterations);
    }
    if (auto it = document.find("generation"); it != document.end()) {
      config.generation.weaksup_top_n = it->value("weaksup_top_n", config.generation.weaksup_top_n);
      config.generation.extractive_top_k =
          it->value("extractive_top_k", config.generation.extractive_top_k);
    }
    if (auto it = document.find("metrics"); it != document.end()) {
      config.metrics.max_n = it->value("max_n", config.metrics.max_n);
      const std::string aggregation = it->value("aggregation", std::string("corpus"));
      if (aggregation == "corpus") {
        config.metrics.aggregation = BleuAggregation::kCorpus;
      } else if (aggregation == "sentence") {
        config.metrics.aggregation = BleuAggregation::kSentence;
      } else {
        throw Error(ErrorKind::kConfig, "metrics.aggregation must be corpus or sentence");
      }
    }
    config.seed = document.value("seed", config.seed);
    config.training.seed = config.seed;
    config.timestamp = document.value("timestamp", std::string());
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kConfig, std::string("invalid config: ") + e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kValidation) throw Error(ErrorKind::kConfig, e.what());
    throw;
  }
  config.validate();
  return config;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  json document;
  try {
    document = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::kParse,
                path.string() + ": malformed JSON at byte " + std::to_string(e.byte), e.byte);
  }
  return parse_config(document, path.parent_path().empty() ? std::filesystem::path(".")
                                                           : path.parent_path());
}

}  // namespace medifact
