// Copyright 2026 The MediFact Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "medifact/error.hpp"
#include "medifact/selection.hpp"
#include "medifact/translation.hpp"
#include "oracles.hpp"

using medifact::Candidate;
using medifact::CandidateSource;
using medifact::Encounter;
using medifact::Error;
using medifact::ErrorKind;
using medifact::Language;
using medifact::Projection;
using medifact::StubTextEncoder;

namespace {

Candidate text_candidate(std::string text, Language language = Language::kEn) {
  return Candidate{std::move(text), language, CandidateSource::kWeakSup, std::nullopt};
}

std::vector<double> normalized(std::vector<double> v) {
  const double n = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
  for (double& x : v) x /= n;
  return v;
}

// Unit vector whose cosines with `a` and `b` are exactly `ca` and `cb` (up to
// rounding), built by Gram-Schmidt on a, b and a third direction.
std::vector<double> vector_with_cosines(const std::vector<double>& a, double ca,
                                        const std::vector<double>& b, double cb) {
  const auto dot = [](const auto& x, const auto& y) {
    return std::inner_product(x.begin(), x.end(), y.begin(), 0.0);
  };
  const auto orthogonal = [&](std::vector<double> v, const std::vector<double>& u) {
    const double d = dot(v, u);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= d * u[i];
    return normalized(v);
  };
  const auto u1 = normalized(a);
  const auto u2 = orthogonal(b, u1);
  std::vector<double> e(a.size(), 0.0);
  std::size_t k = 0;
  std::vector<double> u3;
  do {
    std::fill(e.begin(), e.end(), 0.0);
    e[k++] = 1.0;
    u3 = orthogonal(orthogonal(e, u1), u2);
  } while (std::abs(dot(u3, u1)) > 1e-9);
  const double c12 = dot(normalized(b), u1);
  const double s12 = dot(normalized(b), u2);
  const double x1 = ca;
  const double x2 = (cb - ca * c12) / s12;
  const double x3 = std::sqrt(1.0 - x1 * x1 - x2 * x2);
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = x1 * u1[i] + x2 * u2[i] + x3 * u3[i];
  return out;
}

class ZhFailingTranslator final : public medifact::TranslationProvider {
 public:
  const std::string& id() const override { return id_; }
  bool concurrency_safe() const override { return true; }
  std::string translate(std::string_view text, Language, Language target) const override {
    if (target == Language::kZh) throw std::runtime_error("zh endpoint down");
    return std::string(text);
  }

 private:
  std::string id_ = "zh-failing";
};

}  // namespace

TEST_CASE("cosine similarity examples") {
  using medifact::cosine_similarity;
  const std::vector<double> a = {1, 2, 2};
  CHECK(cosine_similarity(a, a) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(cosine_similarity(std::vector<double>{1, 0}, std::vector<double>{0, 1}) == 0.0);
  CHECK(cosine_similarity(std::vector<double>{1, 2}, std::vector<double>{3, -1}) ==
        doctest::Approx(1.0 / (std::sqrt(5.0) * std::sqrt(10.0))).epsilon(1e-15));
  CHECK(cosine_similarity(std::vector<double>{0, 0}, std::vector<double>{3, -1}) == 0.0);
  CHECK(cosine_similarity(std::vector<double>{0, 0}, std::vector<double>{0, 0}) == 0.0);
  try {
    cosine_similarity(std::vector<double>{1, 2}, std::vector<double>{1, 2, 3});
    FAIL("expected a validation error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kValidation);
  }
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  for (int i = 0; i < 500; ++i) {
    std::vector<double> x(7), y(7);
    for (double& v : x) v = g(rng) * 1e150;
    for (double& v : y) v = g(rng) * 1e-150;
    const double c = cosine_similarity(x, y);
    CHECK(c >= -1.0);
    CHECK(c <= 1.0);
  }
}

TEST_CASE("stub text encoder matches an independent re-implementation") {
  const StubTextEncoder encoder;
  std::mt19937_64 rng(9);
  for (int i = 0; i < 200; ++i) {
    const std::string text = testing_support::random_ascii_sentence(rng, 0, 8);
    CHECK(encoder.encode(text, Language::kEn) == oracle::stub_encoder(text));
  }
  CHECK(encoder.encode("Red Rash", Language::kEn) == encoder.encode("red rash", Language::kEs));
  CHECK(encoder.encode("", Language::kEn) == std::vector<double>(64, 0.0));
  CHECK(encoder.encode("\xe7\x9a\xae\xe7\x96\xb9", Language::kZh).size() == 64);
}

TEST_CASE("select_response examples") {
  const StubTextEncoder encoder;
  const Projection identity = Projection::identity(64);
  std::vector<double> image(64, 0.0);
  image[3] = 1.0;
  const std::vector<Candidate> single = {text_candidate("anything at all")};
  const auto one = medifact::select_response(image, single, encoder, identity);
  CHECK(one.index == 0u);
  CHECK(one.text == "anything at all");

  // similarities 0.2, 0.9, 0.9 with the two 0.9 candidates tied exactly
  const std::string t0 = "keep the area dry";
  const std::string t1 = "apply a steroid cream twice daily";
  const auto e0 = encoder.encode(t0, Language::kEn);
  const auto e1 = encoder.encode(t1, Language::kEn);
  const auto v = vector_with_cosines(e1, 0.9, e0, 0.2);
  CHECK(oracle::cosine(v, e0) == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(oracle::cosine(v, e1) == doctest::Approx(0.9).epsilon(1e-12));
  const std::vector<Candidate> tied = {text_candidate(t0), text_candidate(t1), text_candidate(t1)};
  const auto winner = medifact::select_response(v, tied, encoder, identity);
  CHECK(winner.index == 1u);
  CHECK(winner.similarity == doctest::Approx(0.9).epsilon(1e-12));

  std::vector<double> scaled = v;
  for (double& x : scaled) x *= 5.0;
  const auto again = medifact::select_response(scaled, tied, encoder, identity);
  CHECK(again.index == winner.index);
  CHECK(again.text == winner.text);

  CHECK(medifact::select_response(std::vector<double>(64, 0.0), tied, encoder, identity).index == 0u);

  try {
    medifact::select_response(v, std::vector<Candidate>{}, encoder, identity);
    FAIL("expected a selection error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kSelection);
  }
  try {
    medifact::select_response(std::vector<double>(10, 1.0), tied, encoder, Projection::identity(10));
    FAIL("expected a config error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kConfig);
  }
}

TEST_CASE("projections align image and text dims") {
  const StubTextEncoder encoder;
  const Projection seeded = Projection::seeded(10, 64, 7);
  CHECK(seeded.in_dim() == 10);
  CHECK(seeded.out_dim() == 64);
  CHECK(seeded.apply(std::vector<double>(10, 1.0)).size() == 64);
  const std::vector<Candidate> c = {text_candidate("a"), text_candidate("b")};
  CHECK_NOTHROW(medifact::select_response(std::vector<double>(10, 1.0), c, encoder, seeded));
  const Projection m = Projection::from_matrix({{1, 0}, {0, 2}, {1, 1}});
  CHECK(m.apply(std::vector<double>{3, 4}) == std::vector<double>{3, 8, 7});
  CHECK_THROWS_AS(m.apply(std::vector<double>{1, 2, 3}), Error);
}

TEST_CASE("candidate ordering is stable by source") {
  std::vector<Candidate> list = {
      {"x", Language::kEn, CandidateSource::kAbstractive, std::nullopt},
      {"y", Language::kEn, CandidateSource::kWeakSup, std::nullopt},
      {"z", Language::kEn, CandidateSource::kExtractive, std::nullopt},
      {"w", Language::kEn, CandidateSource::kWeakSup, std::nullopt}};
  medifact::order_candidates(list);
  CHECK(list[0].text == "y");
  CHECK(list[1].text == "w");
  CHECK(list[2].text == "z");
  CHECK(list[3].text == "x");
}

TEST_CASE("individual mode") {
  const StubTextEncoder encoder;
  const Projection identity = Projection::identity(64);
  Encounter e;
  e.encounter_id = "E1";
  std::vector<double> image(64, 0.5);
  std::map<Language, std::vector<Candidate>> lists = {
      {Language::kEn, {text_candidate("rest")}},
      {Language::kZh, {text_candidate("\xe4\xbc\x91\xe6\x81\xaf", Language::kZh)}},
      {Language::kEs, {text_candidate("descanse", Language::kEs)}}};
  auto result = medifact::run_individual_mode(
      e, lists, {Language::kEn, Language::kZh, Language::kEs}, image, encoder, identity);
  CHECK(result.entries.at(Language::kEn).text == "rest");
  CHECK(result.entries.at(Language::kZh).text == "\xe4\xbc\x91\xe6\x81\xaf");
  CHECK(result.entries.at(Language::kEs).text == "descanse");

  lists[Language::kEn].clear();
  result = medifact::run_individual_mode(e, lists, {Language::kZh, Language::kEs}, image, encoder,
                                         identity);
  CHECK(result.entries.size() == 3);
  CHECK(result.entries.at(Language::kEn).text.empty());
  CHECK_FALSE(result.entries.at(Language::kEn).index.has_value());

  lists.erase(Language::kEs);
  try {
    medifact::run_individual_mode(e, lists, {Language::kZh, Language::kEs}, image, encoder, identity);
    FAIL("expected a config error");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::kConfig);
  }
}

TEST_CASE("individual mode winners match brute-force maximization") {
  const StubTextEncoder encoder;
  const Projection identity = Projection::identity(64);
  std::mt19937_64 rng(21);
  std::normal_distribution<double> g;
  Encounter e;
  e.encounter_id = "E";
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> image(64);
    for (double& x : image) x = g(rng);
    std::map<Language, std::vector<Candidate>> lists;
    for (Language l : medifact::kAllLanguages) {
      for (int k = 0; k < 3; ++k) lists[l].push_back(text_candidate(testing_support::random_ascii_sentence(rng, 1, 6), l));
    }
    const auto result = medifact::run_individual_mode(
        e, lists, {Language::kEn, Language::kZh, Language::kEs}, image, encoder, identity);
    for (Language l : medifact::kAllLanguages) {
      std::size_t best = 0;
      double best_score = -2.0;
      for (std::size_t k = 0; k < 3; ++k) {
        const double s = oracle::cosine(image, oracle::stub_encoder(lists[l][k].text));
        if (s > best_score) {
          best_score = s;
          best = k;
        }
      }
      CHECK(result.entries.at(l).index == best);
    }
  }
}

TEST_CASE("translated mode") {
  const StubTextEncoder encoder;
  const Projection identity = Projection::identity(64);
  const medifact::TranslatorRegistry translators;
  Encounter e;
  e.encounter_id = "E1";
  const std::vector<double> image(64, 1.0);
  const std::vector<Candidate> pivot = {text_candidate("rest the area")};
  auto result = medifact::run_translated_mode(e, Language::kEn, pivot, image, encoder, identity,
                                              translators.get("stub"));
  CHECK(result.entries.size() == 3);
  CHECK(result.entries.at(Language::kEn).text == "rest the area");
  CHECK(result.entries.at(Language::kEs).text == "[es] rest the area");
  CHECK(result.entries.at(Language::kZh).text == "[zh] rest the area");
  CHECK(result.warnings.empty());

  const ZhFailingTranslator flaky;
  result = medifact::run_translated_mode(e, Language::kEn, pivot, image, encoder, identity, flaky);
  CHECK(result.entries.at(Language::kZh).text.empty());
  CHECK(result.entries.at(Language::kEn).text == "rest the area");
  CHECK(result.entries.at(Language::kEs).text == "rest the area");
  CHECK(result.warnings.size() == 1);

  result = medifact::run_translated_mode(e, Language::kZh, pivot, image, encoder, identity,
                                         translators.get("failing"));
  CHECK(result.entries.at(Language::kZh).text == "rest the area");
  CHECK(result.entries.at(Language::kEn).text.empty());
  CHECK(result.entries.at(Language::kEs).text.empty());
  CHECK(result.warnings.size() == 2);

  CHECK_THROWS_AS(medifact::run_translated_mode(e, Language::kEn, std::vector<Candidate>{}, image,
                                                encoder, identity, translators.get("stub")),
                  Error);
  CHECK(translators.get("stub").translate("x y", Language::kZh, Language::kZh) == "x y");
}
