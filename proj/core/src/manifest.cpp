// Copyright 2026 The MediFact Authors
// SPDX-License-Identifier: Apache-2.0

#include "medifact/manifest.hpp"

#include "medifact/error.hpp"
#include "medifact/hashing.hpp"

namespace medifact {

using nlohmann::json;

RunManifest::RunManifest(std::filesystem::path output_dir) : output_dir_(std::move(output_dir)) {}

RunManifest RunManifest::load(const std::filesystem::path& output_dir) {
  RunManifest manifest(output_dir);
  const auto path = output_dir / "manifest.json";
  std::error_code ec;
  if (!std::filesystem::exists(path, ec)) return manifest;
  try {
    const json document = json::parse(read_file(path));
    if (document.at("format_version").get<int>() != kFormatVersion) {
      throw Error(ErrorKind::kValidation, path.string() + ": unsupported manifest version");
    }
    for (const auto& [stage, entry] : document.at("stages").items()) {
      StageRecord record;
      record.config = entry.at("config");
      record.config_hash = entry.at("config_hash").get<std::string>();
      record.inputs = entry.at("inputs").get<std::map<std::string, std::string>>();
      record.outputs = entry.at("outputs").get<std::map<std::string, std::string>>();
      record.elapsed_ms = entry.value("elapsed_ms", 0.0);
      manifest.stages_[stage] = std::move(record);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kValidation, path.string() + ": malformed manifest: " + e.what());
  }
  return manifest;
}

json RunManifest::to_json() const {
  json stages = json::object();
  for (const auto& [stage, record] : stages_) {
    stages[stage] = {{"config", record.config},
                     {"config_hash", record.config_hash},
                     {"inputs", record.inputs},
                     {"outputs", record.outputs},
                     {"elapsed_ms", record.elapsed_ms}};
  }
  return json{{"format_version", kFormatVersion}, {"stages", std::move(stages)}};
}

void RunManifest::save() const {
  write_file(output_dir_ / "manifest.json", to_json().dump(2) + "\n");
}

std::optional<StageRecord> RunManifest::find(const std::string& stage) const {
  auto it = stages_.find(stage);
  if (it == stages_.end()) return std::nullopt;
  return it->second;
}

void RunManifest::put(const std::string& stage, StageRecord record) {
  stages_[stage] = std::move(record);
}

bool RunManifest::up_to_date(const std::string& stage, const std::string& config_hash,
                             const std::map<std::string, std::string>& inputs) const {
  auto it = stages_.find(stage);
  if (it == stages_.end()) return false;
  const StageRecord& record = it->second;
  if (record.config_hash != config_hash || record.inputs != inputs) return false;
  for (const auto& [relative, hash] : record.outputs) {
    const auto path = output_dir_ / relative;
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec)) return false;
    if (sha256_file(path) != hash) return false;
  }
  return true;
}

}  // namespace medifact
