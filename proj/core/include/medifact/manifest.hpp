// Copyright 2026 The MediFact Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MEDIFACT_MANIFEST_HPP_
#define MEDIFACT_MANIFEST_HPP_

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

namespace medifact {

struct StageRecord {
  nlohmann::json config;                        // snapshot of what the stage read
  std::string config_hash;
  std::map<std::string, std::string> inputs;    // path -> sha256
  std::map<std::string, std::string> outputs;   // path relative to output_dir -> sha256
  double elapsed_ms = 0.0;

  bool operator==(const StageRecord&) const = default;
};

// output_dir/manifest.json: one record per completed stage key.
class RunManifest {
 public:
  static constexpr int kFormatVersion = 1;

  explicit RunManifest(std::filesystem::path output_dir);

  // Missing file yields an empty manifest.
  static RunManifest load(const std::filesystem::path& output_dir);
  void save() const;

  const std::filesystem::path& output_dir() const { return output_dir_; }
  std::optional<StageRecord> find(const std::string& stage) const;
  void put(const std::string& stage, StageRecord record);

  /// True when `stage` was recorded with the same config hash and input
  /// hashes and every recorded output still has its recorded hash.
  bool up_to_date(const std::string& stage, const std::string& config_hash,
                  const std::map<std::string, std::string>& inputs) const;

  nlohmann::json to_json() const;

 private:
  std::filesystem::path output_dir_;
  std::map<std::string, StageRecord> stages_;
};

}  // namespace medifact

#endif  // MEDIFACT_MANIFEST_HPP_
