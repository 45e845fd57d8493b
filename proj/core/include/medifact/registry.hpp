// Copyright 2026 The MediFact Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MEDIFACT_REGISTRY_HPP_
#define MEDIFACT_REGISTRY_HPP_

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "medifact/error.hpp"

namespace medifact {

// Id -> provider lookup. Populated at startup, read-only afterwards.
// `Provider` must expose `const std::string& id() const`.
template <typename Provider>
class Registry {
 public:
  explicit Registry(std::string kind) : kind_(std::move(kind)) {}

  // Replaces any provider previously registered under the same id.
  void add(std::shared_ptr<const Provider> provider) {
    std::string id = provider->id();
    providers_[std::move(id)] = std::move(provider);
  }

  bool contains(std::string_view id) const { return providers_.find(id) != providers_.end(); }

  const Provider& get(std::string_view id) const { return *shared(id); }

  std::shared_ptr<const Provider> shared(std::string_view id) const {
    auto it = providers_.find(id);
    if (it == providers_.end()) {
      throw Error(ErrorKind::kRegistry,
                  "unknown " + kind_ + " '" + std::string(id) + "'");
    }
    return it->second;
  }

  std::vector<std::string> ids() const {
    std::vector<std::string> out;
    out.reserve(providers_.size());
    for (const auto& [id, provider] : providers_) out.push_back(id);
    return out;
  }

 private:
  std::string kind_;
  std::map<std::string, std::shared_ptr<const Provider>, std::less<>> providers_;
};

}  // namespace medifact

#endif  // MEDIFACT_REGISTRY_HPP_
