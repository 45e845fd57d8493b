// Copyright 2026 The MediFact Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <random>

#include "medifact/eval.hpp"
#include "medifact/qa.hpp"
#include "medifact/tfidf.hpp"
#include "medifact/vision.hpp"
#include "medifact/weaksup.hpp"

namespace {

const std::vector<std::string> kWords = {"skin",  "rash",   "cream", "apply", "twice", "daily",
                                         "keep",  "dry",    "area",  "see",   "a",     "doctor",
                                         "the",   "lesion", "itch",  "red",   "patch", "week"};

std::string sentence(std::mt19937_64& rng, int words) {
  std::uniform_int_distribution<std::size_t> pick(0, kWords.size() - 1);
  std::string out;
  for (int i = 0; i < words; ++i) out += (i ? " " : "") + kWords[pick(rng)];
  return out;
}

void BM_DeltaBleu(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto words = static_cast<int>(state.range(0));
  const std::string hyp = sentence(rng, words);
  std::vector<medifact::WeightedReference> refs;
  for (int i = 0; i < 5; ++i) refs.push_back({sentence(rng, words), 0.2 * (i + 1)});
  for (auto _ : state) {
    benchmark::DoNotOptimize(medifact::delta_bleu(hyp, refs, medifact::Language::kEn));
  }
}
BENCHMARK(BM_DeltaBleu)->Arg(10)->Arg(50)->Arg(200);

void BM_StubExtraction(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const auto side = static_cast<int>(state.range(0));
  medifact::Image image{"bench", side, side, 3, std::vector<std::uint8_t>(static_cast<std::size_t>(side * side * 3))};
  for (auto& px : image.pixels) px = static_cast<std::uint8_t>(rng());
  const medifact::StubBackbone backbone;
  for (auto _ : state) benchmark::DoNotOptimize(backbone.extract(image));
}
BENCHMARK(BM_StubExtraction)->Arg(64)->Arg(512);

void BM_TrainClassifier(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<medifact::ImageEmbedding> features;
  std::vector<int> labels;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> v(64);
    for (double& x : v) x = g(rng) + static_cast<double>(i % 3);
    features.emplace_back(std::move(v), "stub");
    labels.push_back(static_cast<int>(i % 3));
  }
  std::vector<medifact::LabelClass> classes;
  for (int c = 0; c < 3; ++c) classes.push_back({c, "class " + std::to_string(c), n / 3});
  const medifact::LabelSpace space(classes);
  const medifact::TrainingParams params;
  for (auto _ : state) benchmark::DoNotOptimize(medifact::train_classifier(features, labels, space, params));
}
BENCHMARK(BM_TrainClassifier)->Arg(30)->Arg(300)->Unit(benchmark::kMillisecond);

void BM_Retrieval(benchmark::State& state) {
  std::mt19937_64 rng(4);
  std::vector<medifact::Passage> corpus;
  std::vector<std::string> texts;
  for (int i = 0; i < state.range(0); ++i) {
    corpus.push_back({sentence(rng, 20), "enc-" + std::to_string(i)});
    texts.push_back(corpus.back().text);
  }
  medifact::TfidfVectorizer vectorizer;
  vectorizer.fit(texts);
  const medifact::PassageIndex index(corpus, vectorizer);
  const std::string query = sentence(rng, 12);
  for (auto _ : state) benchmark::DoNotOptimize(index.query(query, 5));
}
BENCHMARK(BM_Retrieval)->Arg(100)->Arg(1000);

}  // namespace
BENCHMARK_MAIN();
