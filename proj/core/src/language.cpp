// Copyright 2026 The MediFact Authors
// SPDX-License-Identifier: Apache-2.0

#include "medifact/language.hpp"

#include <string>

#include "medifact/error.hpp"

namespace medifact {

std::string_view to_string(Language language) {
  switch (language) {
    case Language::kEn: return "en";
    case Language::kZh: return "zh";
    case Language::kEs: return "es";
  }
  return "??";
}

Language parse_language(std::string_view code) {
  std::string lower(code);
  for (char& c : lower) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  if (lower == "en") return Language::kEn;
  if (lower == "zh") return Language::kZh;
  if (lower == "es") return Language::kEs;
  throw Error(ErrorKind::kValidation, "unknown language '" + std::string(code) +
                                          "' (expected en, zh or es)");
}

}  // namespace medifact
