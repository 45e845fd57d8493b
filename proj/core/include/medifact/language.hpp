// Copyright 2026 The MediFact Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MEDIFACT_LANGUAGE_HPP_
#define MEDIFACT_LANGUAGE_HPP_

#include <array>
#include <string_view>

namespace medifact {

// The three task languages. Declaration order is the canonical output order.
enum class Language { kEn, kZh, kEs };

inline constexpr std::array<Language, 3> kAllLanguages = {Language::kEn, Language::kZh,
                                                          Language::kEs};

std::string_view to_string(Language language);

// Accepts "en", "zh", "es" (case-insensitive). Throws Error(kValidation) otherwise.
Language parse_language(std::string_view code);

}  // namespace medifact

#endif  // MEDIFACT_LANGUAGE_HPP_
