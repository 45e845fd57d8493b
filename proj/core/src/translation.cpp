// Copyright 2026 The MediFact Authors
// SPDX-License-Identifier: Apache-2.0

#include "medifact/translation.hpp"

#include "medifact/error.hpp"

namespace medifact {

std::string StubTranslator::translate(std::string_view text, Language source,
                                      Language target) const {
  if (source == target) return std::string(text);
  return "[" + std::string(to_string(target)) + "] " + std::string(text);
}

std::string FailingTranslator::translate(std::string_view, Language, Language) const {
  throw Error(ErrorKind::kProvider, "translator 'failing' always fails");
}

TranslatorRegistry::TranslatorRegistry() : Registry<TranslationProvider>("translator") {
  add(std::make_shared<StubTranslator>());
  add(std::make_shared<FailingTranslator>());
}

}  // namespace medifact
