// Copyright 2026 The MediFact Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MEDIFACT_TEXT_HPP_
#define MEDIFACT_TEXT_HPP_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "medifact/language.hpp"

namespace medifact {

/// Normalizes free text coming from the dataset.
///
/// Whitespace runs (any Unicode White_Space) become one ASCII space, other
/// control characters (category Cc) are dropped, the ends are trimmed and the
/// result is put in NFC. Invalid UTF-8 sequences become U+FFFD. Idempotent.
std::string clean_text(std::string_view raw);

// Locale-independent full lowercasing.
std::string to_lower(std::string_view text);

// UTF-8 code points of `text`, one string per code point.
std::vector<std::string> split_code_points(std::string_view text);

enum class Punctuation { kKeep, kDrop };

/// Lowercased tokens. en/es: whitespace separated words with every
/// punctuation character split off as its own token. zh: one token per
/// non-whitespace character.
std::vector<std::string> tokenize(std::string_view text, Language language,
                                  Punctuation punctuation = Punctuation::kKeep);

// Token count used for response completeness: whitespace tokens for en/es,
// non-whitespace characters for zh.
std::size_t count_completeness_tokens(std::string_view text, Language language);

}  // namespace medifact

#endif  // MEDIFACT_TEXT_HPP_
