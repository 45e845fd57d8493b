// Copyright 2026 The MediFact Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <random>
#include <string>

#include "medifact/text.hpp"

using medifact::clean_text;
using medifact::Language;

namespace {

void append_utf8(std::string& out, char32_t c) {
  if (c < 0x80) {
    out.push_back(static_cast<char>(c));
  } else if (c < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (c >> 6)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  } else if (c < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (c >> 12)));
    out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (c >> 18)));
    out.push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  }
}

bool is_space(char32_t c) {
  return c == U' ' || (c >= 0x09 && c <= 0x0D) || c == 0x85 || c == 0xA0 || c == 0x2003 ||
         c == 0x2028 || c == 0x3000;
}

struct Messy {
  std::string text;
  int whitespace_runs = 0;
};

// Mix of ASCII, whitespace, controls, combining marks, CJK and raw bytes.
Messy random_messy_string(std::mt19937_64& rng) {
  static const char32_t kPool[] = {
      U'a',    U'E',    U'z',    U'0',    U' ',    U'\t',   U'\n',   U'\r',   0x0B,
      0x0C,    0x01,    0x1F,    0x7F,    0x85,    0xA0,    0x2003,  0x2028,  0x3000,
      0x0301,  0x0308,  0x0327,  U'e',    U'c',    0x00E9,  0x1E09,  0x212B,  0x00C5,
      0x4E2D,  0x6587,  U',',    U'.',    0x200B,  0xFEFF,  0x1F600, 0xAC00,  0x1100,
      0x1161,  0x11A8};
  Messy out;
  bool in_run = false;
  const int length = static_cast<int>(rng() % 24);
  for (int i = 0; i < length; ++i) {
    if (rng() % 20 == 0) {
      out.text.push_back(static_cast<char>(0x80 + rng() % 0x40));  // stray continuation byte
      in_run = false;
      continue;
    }
    const char32_t c = kPool[rng() % (sizeof(kPool) / sizeof(kPool[0]))];
    append_utf8(out.text, c);
    if (is_space(c) && !in_run) ++out.whitespace_runs;
    in_run = is_space(c);
  }
  return out;
}

int ascii_space_runs(const std::string& s) {
  int runs = 0;
  bool in_run = false;
  for (char c : s) {
    if (c == ' ' && !in_run) ++runs;
    in_run = c == ' ';
  }
  return runs;
}

}  // namespace

TEST_CASE("clean_text collapses whitespace and trims") {
  CHECK(clean_text("  hello\t\nworld ") == "hello world");
  CHECK(clean_text("") == "");
  CHECK(clean_text(" \t\n ") == "");
}

TEST_CASE("clean_text strips control characters and composes") {
  CHECK(clean_text("a\x01" "b\x7f") == "ab");
  CHECK(clean_text("e\xcc\x81") == "\xc3\xa9");         // e + combining acute -> U+00E9
  CHECK(clean_text("a\xc2\xa0\xe3\x80\x80" "b") == "a b");  // NBSP and ideographic space
}

TEST_CASE("clean_text is idempotent on 1000 random strings") {
  std::mt19937_64 rng(1234);
  for (int i = 0; i < 1000; ++i) {
    const Messy raw = random_messy_string(rng);
    const std::string once = clean_text(raw.text);
    CAPTURE(raw.text);
    CHECK(clean_text(once) == once);
    CHECK(ascii_space_runs(once) <= raw.whitespace_runs);
  }
}

TEST_CASE("tokenize splits punctuation for en and characters for zh") {
  using V = std::vector<std::string>;
  CHECK(medifact::tokenize("Red, itchy rash.", Language::kEn) == V{"red", ",", "itchy", "rash", "."});
  CHECK(medifact::tokenize("Red, itchy rash.", Language::kEn, medifact::Punctuation::kDrop) ==
        V{"red", "itchy", "rash"});
  CHECK(medifact::tokenize("\xe7\x9a\xae\xe7\x96\xb9", Language::kZh) ==
        V{"\xe7\x9a\xae", "\xe7\x96\xb9"});
  CHECK(medifact::tokenize("", Language::kEs).empty());
}

TEST_CASE("completeness tokens") {
  CHECK(medifact::count_completeness_tokens("one two  three", Language::kEn) == 3);
  CHECK(medifact::count_completeness_tokens("\xe7\x9a\xae \xe7\x96\xb9", Language::kZh) == 2);
  CHECK(medifact::count_completeness_tokens("", Language::kEs) == 0);
}
