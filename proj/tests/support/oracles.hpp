// Copyright 2026 The MediFact Authors
// SPDX-License-Identifier: Apache-2.0

// Independent reference implementations used to check the library. None of
// these call into medifact_core.

#ifndef MEDIFACT_TESTS_ORACLES_HPP_
#define MEDIFACT_TESTS_ORACLES_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace oracle {

struct Ref {
  std::vector<std::string> tokens;
  double weight = 0.0;
};

// Per-order sums of one or more sentences, counted by brute force.
struct Counts {
  std::vector<double> credit;
  std::vector<double> total;
  double hyp_len = 0.0;
  double ref_len = 0.0;
};

Counts bleu_counts(const std::vector<std::string>& hyp, const std::vector<Ref>& refs, int max_n);
void accumulate(Counts& into, const Counts& from);
double bleu_from_counts(const Counts& counts);
double delta_bleu(const std::vector<std::string>& hyp, const std::vector<Ref>& refs,
                  int max_n = 4);

// ASCII-only tokenizer: lowercase, split on spaces, punctuation as tokens.
std::vector<std::string> ascii_tokens(const std::string& text, bool keep_punctuation = true);

// Stub backbone for images whose sides are multiples of 16 (box averaging).
std::vector<double> stub_backbone(const std::vector<double>& gray, int width, int height);

// Stub text encoder for ASCII text.
std::vector<double> stub_encoder(const std::string& text);

double cosine(const std::vector<double>& a, const std::vector<double>& b);

// Smoothed tf-idf with raw counts: tf x (ln((1 + N) / (1 + df)) + 1).
std::map<std::string, double> tfidf(const std::vector<std::string>& document_tokens,
                                    const std::vector<std::vector<std::string>>& corpus);
double sparse_cosine(const std::map<std::string, double>& a, const std::map<std::string, double>& b);

}  // namespace oracle

namespace testing_support {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

// Copies the static trilingual fixture into `dir` and returns the config path.
std::filesystem::path copy_fixture(const std::filesystem::path& dir);

std::filesystem::path fixture_dir();

std::string random_ascii_sentence(std::mt19937_64& rng, int min_words, int max_words);

}  // namespace testing_support

#endif  // MEDIFACT_TESTS_ORACLES_HPP_
