// Copyright 2026 The MediFact Authors
// SPDX-License-Identifier: Apache-2.0

#include "medifact/text.hpp"

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include <stdexcept>

namespace medifact {
namespace {

icu::UnicodeString from_utf8(std::string_view text) {
  return icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
}

std::string to_utf8(const icu::UnicodeString& text) {
  std::string out;
  text.toUTF8String(out);
  return out;
}

const icu::Normalizer2& nfc() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* instance = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status) || instance == nullptr) {
    throw std::runtime_error("ICU NFC normalizer unavailable");
  }
  return *instance;
}

template <typename Fn>
void for_each_code_point(const icu::UnicodeString& text, Fn&& fn) {
  for (int32_t i = 0; i < text.length();) {
    UChar32 c = text.char32At(i);
    i += U16_LENGTH(c);
    fn(c);
  }
}

}  // namespace

std::string clean_text(std::string_view raw) {
  const icu::UnicodeString input = from_utf8(raw);
  icu::UnicodeString collapsed;
  bool pending_space = false;
  for_each_code_point(input, [&](UChar32 c) {
    if (u_isUWhiteSpace(c)) {
      pending_space = !collapsed.isEmpty();
      return;
    }
    if (u_charType(c) == U_CONTROL_CHAR) return;
    if (pending_space) {
      collapsed.append(static_cast<UChar>(' '));
      pending_space = false;
    }
    collapsed.append(c);
  });
  UErrorCode status = U_ZERO_ERROR;
  icu::UnicodeString normalized = nfc().normalize(collapsed, status);
  if (U_FAILURE(status)) return to_utf8(collapsed);
  return to_utf8(normalized);
}

std::string to_lower(std::string_view text) {
  icu::UnicodeString u = from_utf8(text);
  u.toLower(icu::Locale::getRoot());
  return to_utf8(u);
}

std::vector<std::string> split_code_points(std::string_view text) {
  std::vector<std::string> out;
  for_each_code_point(from_utf8(text), [&](UChar32 c) {
    out.push_back(to_utf8(icu::UnicodeString(c)));
  });
  return out;
}

std::vector<std::string> tokenize(std::string_view text, Language language,
                                  Punctuation punctuation) {
  icu::UnicodeString lowered = from_utf8(text);
  lowered.toLower(icu::Locale::getRoot());

  std::vector<std::string> tokens;
  icu::UnicodeString word;
  auto flush = [&] {
    if (!word.isEmpty()) {
      tokens.push_back(to_utf8(word));
      word.remove();
    }
  };
  for_each_code_point(lowered, [&](UChar32 c) {
    if (u_isUWhiteSpace(c) || u_charType(c) == U_CONTROL_CHAR) {
      flush();
      return;
    }
    const bool punct = u_ispunct(c);
    if (language == Language::kZh || punct) {
      flush();
      if (!punct || punctuation == Punctuation::kKeep) {
        tokens.push_back(to_utf8(icu::UnicodeString(c)));
      }
      return;
    }
    word.append(c);
  });
  flush();
  return tokens;
}

std::size_t count_completeness_tokens(std::string_view text, Language language) {
  std::size_t count = 0;
  bool in_word = false;
  for_each_code_point(from_utf8(text), [&](UChar32 c) {
    const bool space = u_isUWhiteSpace(c);
    if (language == Language::kZh) {
      if (!space) ++count;
      return;
    }
    if (!space && !in_word) ++count;
    in_word = !space;
  });
  return count;
}

}  // namespace medifact
