// Copyright 2026 The MediFact Authors
// SPDX-License-Identifier: Apache-2.0

#include "medifact/pipeline.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <set>

#include "medifact/error.hpp"
#include "medifact/hashing.hpp"
#include "medifact/manifest.hpp"
#include "medifact/text.hpp"
#include "medifact/weaksup.hpp"

namespace medifact {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string relative_to(const fs::path& path, const fs::path& base) {
  return fs::absolute(path).lexically_normal().lexically_relative(
                              fs::absolute(base).lexically_normal())
      .generic_string();
}

std::map<std::string, std::string> hash_files(const std::vector<fs::path>& paths) {
  std::map<std::string, std::string> out;
  for (const fs::path& p : paths) out[p.generic_string()] = sha256_file(p);
  return out;
}

std::string capitalized(std::string_view s) {
  std::string out(s);
  if (!out.empty() && out[0] >= 'a' && out[0] <= 'z') out[0] = static_cast<char>(out[0] - 32);
  return out;
}

std::string report_timestamp(const PipelineConfig& config) {
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch != nullptr && *epoch != '\0') {
    char* end = nullptr;
    const long long seconds = std::strtoll(epoch, &end, 10);
    if (end != nullptr && *end == '\0') {
      const std::time_t t = static_cast<std::time_t>(seconds);
      std::tm tm{};
      gmtime_r(&t, &tm);
      char buffer[32];
      std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &tm);
      return buffer;
    }
  }
  return config.timestamp;
}

// Tracks one stage: skip check, timing and the manifest entry.
class StageRun {
 public:
  StageRun(const PipelineConfig& config, std::string key, json snapshot,
           std::map<std::string, std::string> inputs)
      : manifest_(RunManifest::load(config.output_dir)),
        key_(std::move(key)),
        snapshot_(std::move(snapshot)),
        config_hash_(sha256_hex(snapshot_.dump())),
        inputs_(std::move(inputs)),
        start_(std::chrono::steady_clock::now()) {}

  bool up_to_date() const { return manifest_.up_to_date(key_, config_hash_, inputs_); }

  StageResult skipped() const {
    spdlog::info("{}: up to date, skipping (use --force to rerun)", key_);
    StageResult result;
    result.skipped = true;
    if (auto record = manifest_.find(key_)) {
      for (const auto& [path, hash] : record->outputs) {
        result.outputs.push_back(manifest_.output_dir() / path);
      }
    }
    return result;
  }

  const RunManifest& manifest() const { return manifest_; }

  void finish(const std::vector<fs::path>& outputs) {
    StageRecord record;
    record.config = snapshot_;
    record.config_hash = config_hash_;
    record.inputs = inputs_;
    for (const fs::path& p : outputs) {
      record.outputs[relative_to(p, manifest_.output_dir())] = sha256_file(p);
    }
    record.elapsed_ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - start_)
                            .count();
    manifest_.put(key_, std::move(record));
    manifest_.save();
  }

 private:
  RunManifest manifest_;
  std::string key_;
  json snapshot_;
  std::string config_hash_;
  std::map<std::string, std::string> inputs_;
  std::chrono::steady_clock::time_point start_;
};

std::vector<Encounter> read_dataset(const fs::path& path, Language language) {
  std::error_code ec;
  if (!fs::exists(path, ec)) {
    throw Error(ErrorKind::kIo, "dataset file '" + path.string() + "' is missing; run ingest first");
  }
  return load_encounters(path, language);
}

// Pooled embedding per encounter id, computed once per backbone.
class EmbeddingCache {
 public:
  EmbeddingCache(const Backbone& backbone, const ImageStore& store)
      : backbone_(backbone), store_(store) {}

  const ImageEmbedding& get(const Encounter& encounter) {
    auto it = cache_.find(encounter.encounter_id);
    if (it != cache_.end()) return it->second;
    std::vector<ImageEmbedding> per_image;
    for (const std::string& image_id : encounter.image_ids) {
      per_image.push_back(backbone_.extract(store_.load(image_id)));
    }
    ImageEmbedding pooled =
        per_image.empty() ? zero_embedding(backbone_) : pool_encounter_embedding(per_image);
    return cache_.emplace(encounter.encounter_id, std::move(pooled)).first->second;
  }

 private:
  const Backbone& backbone_;
  const ImageStore& store_;
  std::map<std::string, ImageEmbedding> cache_;
};

std::vector<fs::path> image_files(const std::vector<Encounter>& encounters,
                                  const ImageStore& store) {
  std::set<fs::path> files;
  for (const Encounter& e : encounters) {
    for (const std::string& id : e.image_ids) {
      try {
        files.insert(store.resolve(id));
      } catch (const Error&) {
        // Surfaces with encounter context when the image is loaded.
      }
    }
  }
  return {files.begin(), files.end()};
}

Projection make_projection(const PipelineConfig& config, std::size_t image_dim,
                           std::size_t text_dim) {
  if (config.projection == "identity") {
    if (image_dim != text_dim) {
      throw Error(ErrorKind::kConfig, "selection backbone dim " + std::to_string(image_dim) +
                                          " differs from text encoder dim " +
                                          std::to_string(text_dim) +
                                          "; configure a projection");
    }
    return Projection::identity(image_dim);
  }
  if (config.projection == "seeded") return Projection::seeded(image_dim, text_dim, config.seed);
  Projection p = Projection::load(config.projection);
  if (p.in_dim() != image_dim || p.out_dim() != text_dim) {
    throw Error(ErrorKind::kConfig, "projection matrix shape does not match backbone/encoder dims");
  }
  return p;
}

}  // namespace

ProviderSet ProviderSet::from_config(const PipelineConfig& config) {
  ProviderSet set;
  for (const BackboneSpec& spec : config.backbones) {
    set.backbones.add(FeatureTableBackbone::load(spec.id, spec.features));
  }
  if (config.providers.http_translator) {
    set.translators.add(
        std::make_shared<HttpTranslator>("http", *config.providers.http_translator));
  }
  if (config.providers.http_generator) {
    set.generators.add(std::make_shared<HttpGenerator>("http", *config.providers.http_generator));
  }
  return set;
}

PipelineConfig with_backbone(PipelineConfig config, const std::string& backbone) {
  config.backbone = backbone;
  return config;
}

PipelineConfig with_mode(PipelineConfig config, SelectionMode mode) {
  config.mode = mode;
  if (mode == SelectionMode::kTranslated && !config.pivot) config.pivot = Language::kZh;
  return config;
}

Pipeline::Pipeline(PipelineConfig config)
    : Pipeline(config, std::make_shared<const ProviderSet>(ProviderSet::from_config(config))) {}

Pipeline::Pipeline(PipelineConfig config, std::shared_ptr<const ProviderSet> providers)
    : config_(std::move(config)), providers_(std::move(providers)) {
  config_.validate();
}

std::string Pipeline::run_label() const {
  return config_.backbone + "-" + capitalized(to_string(config_.mode));
}

fs::path Pipeline::dataset_path(const std::string& split, Language language) const {
  return config_.output_dir / "dataset" / (split + "." + std::string(to_string(language)) + ".json");
}

fs::path Pipeline::model_path(Language language) const {
  return config_.output_dir / "models" / config_.backbone /
         (std::string(to_string(language)) + ".json");
}

fs::path Pipeline::predictions_path() const {
  return config_.output_dir / "predictions" / (run_label() + ".json");
}

fs::path Pipeline::report_path(const std::string& extension) const {
  return config_.output_dir / "reports" / (run_label() + extension);
}

std::vector<Language> Pipeline::model_languages() const {
  std::set<Language> needed(config_.languages.begin(), config_.languages.end());
  if (config_.mode == SelectionMode::kTranslated && config_.pivot) needed.insert(*config_.pivot);
  return {needed.begin(), needed.end()};
}

StageResult Pipeline::ingest(const StageOptions& options) {
  std::vector<Language> languages;
  {
    std::set<Language> all(config_.languages.begin(), config_.languages.end());
    if (config_.pivot) all.insert(*config_.pivot);
    languages.assign(all.begin(), all.end());
  }
  std::vector<fs::path> input_files{config_.authors};
  for (Language l : languages) {
    input_files.push_back(config_.train_encounters.at(l));
    input_files.push_back(config_.test_encounters.at(l));
  }
  for (const fs::path& p : input_files) {
    std::error_code ec;
    if (!fs::is_regular_file(p, ec)) {
      throw Error(ErrorKind::kIo, "input file '" + p.string() + "' does not exist");
    }
  }
  const json full = config_.to_json();
  json snapshot = {{"paths", {{"train", full["paths"]["train"]},
                              {"test", full["paths"]["test"]},
                              {"authors", full["paths"]["authors"]}}},
                   {"languages", languages},
                   {"weighting", full["weighting"]}};
  StageRun run(config_, "ingest", snapshot, hash_files(input_files));
  if (!options.force && run.up_to_date()) return run.skipped();

  StageResult result;
  const AuthorTable authors = load_authors(config_.authors, config_.credential_map());
  std::map<std::string, std::vector<std::string>> image_ids_of;
  std::vector<fs::path> outputs;
  for (const std::string split : {"train", "test"}) {
    for (Language language : languages) {
      const fs::path& source = split == std::string("train") ? config_.train_encounters.at(language)
                                                             : config_.test_encounters.at(language);
      std::vector<Encounter> encounters = load_encounters(source, language);
      std::size_t missing_authors = 0;
      for (Encounter& e : encounters) {
        clean_encounter(e);
        missing_authors +=
            weight_encounter(e, authors, config_.weighting, config_.use_human_scores);
        auto [it, inserted] = image_ids_of.try_emplace(e.encounter_id, e.image_ids);
        if (!inserted && it->second != e.image_ids) {
          throw Error(ErrorKind::kValidation,
                      source.string() + ": encounter '" + e.encounter_id +
                          "' lists different image ids than in another language file");
        }
      }
      if (missing_authors > 0) {
        spdlog::warn("{}: {} response(s) by authors missing from '{}' weighted as unknown",
                     source.string(), missing_authors, config_.authors.string());
        ++result.warnings;
      }
      const fs::path out = dataset_path(split, language);
      write_file(out, encounters_to_json(encounters).dump(1) + "\n");
      outputs.push_back(out);
    }
  }
  run.finish(outputs);
  result.outputs = outputs;
  return result;
}

StageResult Pipeline::train(const StageOptions& options) {
  const std::vector<Language> languages = model_languages();
  const Backbone& backbone = providers_->backbones.get(config_.backbone);
  const ImageStore store(config_.image_dir);

  std::map<Language, std::vector<Encounter>> datasets;
  std::vector<fs::path> inputs;
  std::vector<Encounter> all;
  for (Language l : languages) {
    inputs.push_back(dataset_path("train", l));
    datasets[l] = read_dataset(inputs.back(), l);
    all.insert(all.end(), datasets[l].begin(), datasets[l].end());
  }
  for (const fs::path& p : image_files(all, store)) inputs.push_back(p);
  for (const BackboneSpec& spec : config_.backbones) {
    if (spec.id == config_.backbone) inputs.push_back(spec.features);
  }
  const json snapshot = {{"backbone", config_.backbone},
                         {"languages", languages},
                         {"training",
                          {{"lambda", config_.training.lambda},
                           {"max_iterations", config_.training.max_iterations},
                           {"seed", config_.training.seed}}}};
  StageRun run(config_, "train/" + config_.backbone, snapshot, hash_files(inputs));
  if (!options.force && run.up_to_date()) return run.skipped();

  StageResult result;
  EmbeddingCache embeddings(backbone, store);
  std::vector<fs::path> outputs;
  for (Language language : languages) {
    const std::string tag = "language " + std::string(to_string(language));
    try {
      const std::vector<Encounter>& encounters = datasets.at(language);
      LabelInduction induced = induce_labels(encounters);
      if (induced.dropped > 0) {
        spdlog::warn("{}: {} encounter(s) without a positively weighted response dropped", tag,
                     induced.dropped);
        ++result.warnings;
      }
      std::vector<ImageEmbedding> features;
      std::vector<int> labels;
      for (const Encounter& e : encounters) {
        auto it = induced.assignment.find(e.encounter_id);
        if (it == induced.assignment.end()) continue;
        features.push_back(embeddings.get(e));
        labels.push_back(it->second);
      }
      WeakSupModel model =
          train_classifier(features, labels, induced.label_space, config_.training);
      const fs::path out = model_path(language);
      save_model(model, out);
      outputs.push_back(out);
      spdlog::info("{}: trained {} classes on {} encounters", tag, model.num_classes(),
                   features.size());
    } catch (const Error& e) {
      throw Error(e.kind(), tag + ": " + e.what());
    }
  }
  run.finish(outputs);
  result.outputs = outputs;
  return result;
}

StageResult Pipeline::generate(const StageOptions& options) {
  const std::vector<Language> languages = model_languages();
  const std::set<Language> participating(config_.languages.begin(), config_.languages.end());
  const Backbone& backbone = providers_->backbones.get(config_.backbone);
  const Backbone& selection_backbone =
      providers_->backbones.get(config_.effective_selection_backbone());
  const TextEncoderProvider& encoder = providers_->encoders.get(config_.providers.encoder);
  const GeneratorProvider& generator = providers_->generators.get(config_.providers.generator);
  const TranslationProvider* translator =
      config_.mode == SelectionMode::kTranslated
          ? &providers_->translators.get(config_.providers.translator)
          : nullptr;
  const Projection projection = make_projection(config_, selection_backbone.dim(), encoder.dim());
  const ImageStore store(config_.image_dir);

  std::map<Language, std::vector<Encounter>> train_sets;
  std::map<Language, std::vector<Encounter>> test_sets;
  std::vector<fs::path> inputs;
  std::vector<Encounter> all_test;
  for (Language l : languages) {
    inputs.push_back(dataset_path("train", l));
    train_sets[l] = read_dataset(inputs.back(), l);
    inputs.push_back(dataset_path("test", l));
    test_sets[l] = read_dataset(inputs.back(), l);
    all_test.insert(all_test.end(), test_sets[l].begin(), test_sets[l].end());
    inputs.push_back(model_path(l));
    std::error_code ec;
    if (!fs::exists(inputs.back(), ec)) {
      throw Error(ErrorKind::kIo, "model '" + inputs.back().string() + "' is missing; run train first");
    }
  }
  for (const fs::path& p : image_files(all_test, store)) inputs.push_back(p);
  const json full = config_.to_json();
  const json snapshot = {{"backbone", config_.backbone},
                         {"selection_backbone", config_.effective_selection_backbone()},
                         {"mode", to_string(config_.mode)},
                         {"pivot", full["pivot"]},
                         {"languages", full["languages"]},
                         {"providers", full["providers"]},
                         {"generation", full["generation"]},
                         {"projection", config_.projection},
                         {"seed", config_.seed}};
  StageRun run(config_, "generate/" + run_label(), snapshot, hash_files(inputs));
  if (!options.force && run.up_to_date()) return run.skipped();

  StageResult result;
  std::map<Language, WeakSupModel> models;
  for (Language l : languages) models.emplace(l, load_model(model_path(l)));

  // English extractive/abstractive resources, fit on the training split.
  const bool need_english =
      std::find(languages.begin(), languages.end(), Language::kEn) != languages.end();
  std::optional<PassageIndex> passages;
  TfidfVectorizer vectorizer(Language::kEn);
  if (need_english) {
    std::vector<std::string> documents;
    std::vector<Passage> corpus;
    for (const Encounter& e : train_sets.at(Language::kEn)) {
      documents.push_back(e.query_text());
      for (const GoldResponse& g : e.gold_responses) {
        if (g.weight.value_or(0.0) > 0.0 && !g.text.empty()) {
          documents.push_back(g.text);
          corpus.push_back(Passage{g.text, e.encounter_id});
        }
      }
    }
    vectorizer.fit(documents);
    if (!corpus.empty()) passages.emplace(std::move(corpus), vectorizer);
  }

  EmbeddingCache embeddings(backbone, store);
  EmbeddingCache selection_embeddings(selection_backbone, store);
  std::map<Language, std::map<std::string, const Encounter*>> by_id;
  std::set<std::string> ids;
  for (const auto& [language, encounters] : test_sets) {
    for (const Encounter& e : encounters) {
      by_id[language][e.encounter_id] = &e;
      ids.insert(e.encounter_id);
    }
  }

  auto candidates_for = [&](const Encounter& e, Language language) {
    std::vector<Candidate> out;
    const ImageEmbedding& image = embeddings.get(e);
    const ClassPrediction prediction = predict_response(models.at(language), image);
    const std::vector<int> ranked = rank_classes(prediction.margins);
    const std::size_t top_n = std::min(config_.generation.weaksup_top_n, ranked.size());
    for (std::size_t i = 0; i < top_n; ++i) {
      out.push_back({models.at(language).label_space.at(ranked[i]).canonical_text, language,
                     CandidateSource::kWeakSup, std::nullopt});
    }
    if (language == Language::kEn && passages) {
      RankedPassages retrieved;
      for (RankedPassage& p : passages->query(e.query_text(), passages->size())) {
        if (p.encounter_id == e.encounter_id) continue;  // leave-one-out
        retrieved.push_back(std::move(p));
        if (retrieved.size() == config_.generation.extractive_top_k) break;
      }
      for (const RankedPassage& p : retrieved) {
        out.push_back({p.text, language, CandidateSource::kExtractive, std::nullopt});
      }
      const FusedFeature fused = build_fused_features(e, image, vectorizer);
      std::string generated;
      try {
        generated = abstractive_answer(e.query_text(), fused, retrieved, generator);
      } catch (const Error& err) {
        if (err.kind() != ErrorKind::kGeneration) throw;
        spdlog::warn("encounter '{}': {}; using the top extractive passage", e.encounter_id,
                     err.what());
        ++result.warnings;
        generated = retrieved.empty() ? std::string() : retrieved.front().text;
      }
      if (!generated.empty()) {
        out.push_back({generated, language, CandidateSource::kAbstractive, std::nullopt});
      }
    }
    order_candidates(out);
    return out;
  };

  std::vector<PredictionRecord> predictions;
  for (const std::string& id : ids) {
    PredictionRecord record;
    record.encounter_id = id;
    for (Language l : kAllLanguages) record.responses[l] = "";
    try {
      const Encounter* any = nullptr;
      for (Language l : languages) {
        if (auto it = by_id[l].find(id); it != by_id[l].end()) {
          any = it->second;
          break;
        }
      }
      const std::vector<double> image_vector = [&] {
        auto values = selection_embeddings.get(*any).values();
        return std::vector<double>(values.begin(), values.end());
      }();
      SelectionResult selection;
      if (config_.mode == SelectionMode::kIndividual) {
        std::map<Language, std::vector<Candidate>> lists;
        std::set<Language> active;
        for (Language l : config_.languages) {
          auto it = by_id[l].find(id);
          if (it == by_id[l].end()) {
            spdlog::warn("encounter '{}' missing from the {} test split", id, to_string(l));
            ++result.warnings;
            continue;
          }
          lists[l] = candidates_for(*it->second, l);
          active.insert(l);
        }
        selection = run_individual_mode(*any, lists, active, image_vector, encoder, projection);
      } else {
        const Language pivot = *config_.pivot;
        auto it = by_id[pivot].find(id);
        if (it == by_id[pivot].end()) {
          throw Error(ErrorKind::kInput, "missing from the pivot test split");
        }
        const auto pivot_candidates = candidates_for(*it->second, pivot);
        selection = run_translated_mode(*it->second, pivot, pivot_candidates, image_vector,
                                        encoder, projection, *translator);
        result.warnings += selection.warnings.size();
      }
      for (const auto& [language, entry] : selection.entries) {
        if (participating.contains(language)) record.responses[language] = entry.text;
      }
    } catch (const Error& err) {
      if (err.kind() == ErrorKind::kConfig || err.kind() == ErrorKind::kRegistry) throw;
      spdlog::warn("encounter '{}': {}; emitting empty responses", id, err.what());
      ++result.warnings;
      for (Language l : kAllLanguages) record.responses[l] = "";
    }
    predictions.push_back(std::move(record));
  }

  const fs::path out = predictions_path();
  write_file(out, predictions_to_json(predictions).dump(2) + "\n");
  run.finish({out});
  result.outputs = {out};
  spdlog::info("generate: {} encounters, {} warning(s)", predictions.size(), result.warnings);
  return result;
}

StageResult Pipeline::evaluate(const StageOptions& options,
                               std::optional<fs::path> predictions) {
  const fs::path predictions_file = predictions.value_or(predictions_path());
  std::error_code ec;
  if (!fs::is_regular_file(predictions_file, ec)) {
    throw Error(ErrorKind::kIo, "predictions file '" + predictions_file.string() + "' not found");
  }
  std::vector<fs::path> dataset_files;
  std::map<Language, std::vector<Encounter>> gold;
  for (Language l : config_.languages) {
    dataset_files.push_back(dataset_path("test", l));
    gold[l] = read_dataset(dataset_files.back(), l);
  }
  const auto dataset_hashes = hash_files(dataset_files);

  // Refuse predictions generated against a different dataset.
  RunManifest manifest = RunManifest::load(config_.output_dir);
  const std::string relative = relative_to(predictions_file, config_.output_dir);
  bool found = false;
  const json stages = manifest.to_json()["stages"];
  for (const auto& [key, record] : stages.items()) {
    if (!key.starts_with("generate/") || !record["outputs"].contains(relative)) continue;
    found = true;
    for (const auto& [path, hash] : dataset_hashes) {
      auto it = record["inputs"].find(path);
      if (it != record["inputs"].end() && it->get<std::string>() != hash) {
        throw Error(ErrorKind::kValidation, "predictions '" + predictions_file.string() +
                                                "' were generated from a different dataset ('" +
                                                path + "' changed)");
      }
    }
  }
  if (!found) {
    spdlog::warn("predictions '{}' have no manifest entry; dataset consistency not checked",
                 predictions_file.string());
  }

  std::vector<fs::path> inputs = dataset_files;
  inputs.push_back(predictions_file);
  const json full = config_.to_json();
  const std::string stem = predictions_file.stem().string();
  const json snapshot = {{"languages", full["languages"]},
                         {"metrics", full["metrics"]},
                         {"embedder", config_.providers.embedder},
                         {"metadata", {{"mode", to_string(config_.mode)},
                                       {"backbone", config_.backbone},
                                       {"providers", full["providers"]},
                                       {"seed", config_.seed},
                                       {"timestamp", report_timestamp(config_)}}}};
  StageRun run(config_, "evaluate/" + stem, snapshot, hash_files(inputs));
  if (!options.force && run.up_to_date()) return run.skipped();

  StageResult result;
  const std::vector<PredictionRecord> records = load_predictions(predictions_file);
  EvalConfig eval_config;
  eval_config.languages = config_.languages;
  eval_config.metric = config_.metrics;
  eval_config.embedder = &providers_->encoders.get(config_.providers.embedder);
  RunMetadata metadata;
  metadata.model = stem;
  metadata.mode = to_string(config_.mode);
  metadata.backbone_id = config_.backbone;
  metadata.providers = {{"encoder", config_.providers.encoder},
                        {"translator", config_.providers.translator},
                        {"generator", config_.providers.generator},
                        {"embedder", config_.providers.embedder}};
  metadata.seed = config_.seed;
  metadata.timestamp = report_timestamp(config_);
  const EvalReport report = evaluate_run(records, gold, eval_config, std::move(metadata));

  const fs::path json_out = config_.output_dir / "reports" / (stem + ".json");
  const fs::path text_out = config_.output_dir / "reports" / (stem + ".txt");
  write_file(json_out, report_to_json(report).dump(2) + "\n");
  write_file(text_out, format_report_table(std::span(&report, 1)));
  run.finish({json_out, text_out});
  result.outputs = {json_out, text_out};
  return result;
}

StageResult Pipeline::report(const StageOptions& options) {
  const fs::path dir = config_.output_dir / "reports";
  std::vector<fs::path> report_files;
  std::error_code ec;
  if (fs::is_directory(dir, ec)) {
    for (const auto& entry : fs::directory_iterator(dir)) {
      const fs::path& p = entry.path();
      if (p.extension() == ".json" && p.stem() != "summary") report_files.push_back(p);
    }
  }
  std::sort(report_files.begin(), report_files.end());
  if (report_files.empty()) {
    throw Error(ErrorKind::kIo, "no reports under '" + dir.string() + "'; run evaluate first");
  }
  StageRun run(config_, "report", json::object(), hash_files(report_files));
  if (!options.force && run.up_to_date()) return run.skipped();

  std::vector<EvalReport> reports;
  json all = json::array();
  for (const fs::path& p : report_files) {
    reports.push_back(report_from_json(json::parse(read_file(p))));
    all.push_back(report_to_json(reports.back()));
  }
  const fs::path json_out = dir / "summary.json";
  const fs::path text_out = dir / "summary.txt";
  write_file(json_out, all.dump(2) + "\n");
  write_file(text_out, format_report_table(reports));
  run.finish({json_out, text_out});
  StageResult result;
  result.outputs = {json_out, text_out};
  return result;
}

}  // namespace medifact
