// Copyright 2026 The MediFact Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MEDIFACT_TRANSLATION_HPP_
#define MEDIFACT_TRANSLATION_HPP_

#include <string>
#include <string_view>

#include "medifact/language.hpp"
#include "medifact/qa.hpp"
#include "medifact/registry.hpp"

namespace medifact {

class TranslationProvider {
 public:
  virtual ~TranslationProvider() = default;

  virtual const std::string& id() const = 0;
  virtual bool concurrency_safe() const = 0;
  virtual std::string translate(std::string_view text, Language source,
                                Language target) const = 0;
};

// Offline stand-in: "[<target>] <text>", identity when source == target.
class StubTranslator final : public TranslationProvider {
 public:
  const std::string& id() const override { return id_; }
  bool concurrency_safe() const override { return true; }
  std::string translate(std::string_view text, Language source,
                        Language target) const override;

 private:
  std::string id_ = "stub";
};

// Always throws. Used for fault injection.
class FailingTranslator final : public TranslationProvider {
 public:
  const std::string& id() const override { return id_; }
  bool concurrency_safe() const override { return true; }
  std::string translate(std::string_view text, Language source,
                        Language target) const override;

 private:
  std::string id_ = "failing";
};

/// LibreTranslate-compatible client: POST {"q", "source", "target",
/// "format": "text"[, "api_key"]} and read "translatedText". Failures after
/// the configured retries are thrown as Error(kProvider).
class HttpTranslator final : public TranslationProvider {
 public:
  HttpTranslator(std::string id, HttpEndpoint endpoint);

  const std::string& id() const override { return id_; }
  bool concurrency_safe() const override { return true; }
  std::string translate(std::string_view text, Language source,
                        Language target) const override;

 private:
  std::string id_;
  HttpEndpoint endpoint_;
};

// Registry holding the stub and failing translators by default.
class TranslatorRegistry : public Registry<TranslationProvider> {
 public:
  TranslatorRegistry();
};

}  // namespace medifact

#endif  // MEDIFACT_TRANSLATION_HPP_
