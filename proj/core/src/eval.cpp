// Copyright 2026 The MediFact Authors
// SPDX-License-Identifier: Apache-2.0

#include "medifact/eval.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>
#include <unordered_map>

#include "medifact/error.hpp"
#include "medifact/text.hpp"

namespace medifact {
namespace {

using nlohmann::json;
using NgramCounts = std::unordered_map<std::string, int>;

NgramCounts count_ngrams(const std::vector<std::string>& tokens, int n) {
  NgramCounts counts;
  const auto size = static_cast<int>(tokens.size());
  for (int i = 0; i + n <= size; ++i) {
    std::string key = tokens[static_cast<std::size_t>(i)];
    for (int k = 1; k < n; ++k) {
      key.push_back('\x1f');
      key += tokens[static_cast<std::size_t>(i + k)];
    }
    ++counts[key];
  }
  return counts;
}

double greedy_f1(const std::vector<std::vector<double>>& hyp,
                 const std::vector<std::vector<double>>& ref) {
  if (hyp.empty() || ref.empty()) return 0.0;
  auto directed = [](const auto& from, const auto& to) {
    double sum = 0.0;
    for (const auto& a : from) {
      double best = -1.0;
      for (const auto& b : to) best = std::max(best, cosine_similarity(a, b));
      sum += best;
    }
    return sum / static_cast<double>(from.size());
  };
  const double precision = directed(hyp, ref);
  const double recall = directed(ref, hyp);
  if (precision + recall <= 0.0) return 0.0;
  return std::clamp(2.0 * precision * recall / (precision + recall), 0.0, 1.0);
}

std::string fixed3(double v) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(3) << v;
  return out.str();
}

}  // namespace

std::vector<std::string> tokenize_for_bleu(std::string_view text, Language language) {
  return tokenize(text, language, Punctuation::kKeep);
}

BleuStats::BleuStats(int max_n)
    : credit(static_cast<std::size_t>(std::max(max_n, 0)), 0.0),
      total(static_cast<std::size_t>(std::max(max_n, 0)), 0.0) {}

BleuStats& BleuStats::operator+=(const BleuStats& other) {
  if (other.max_n() != max_n()) {
    throw Error(ErrorKind::kValidation, "cannot add BLEU statistics of different orders");
  }
  for (std::size_t n = 0; n < credit.size(); ++n) {
    credit[n] += other.credit[n];
    total[n] += other.total[n];
  }
  hypothesis_length += other.hypothesis_length;
  reference_length += other.reference_length;
  return *this;
}

BleuStats delta_bleu_stats(std::string_view hypothesis,
                           std::span<const WeightedReference> references, Language language,
                           int max_n) {
  if (max_n < 1) throw Error(ErrorKind::kValidation, "max_n must be at least 1");
  if (references.empty()) throw Error(ErrorKind::kMetric, "no references to score against");
  bool any_positive = false;
  for (const WeightedReference& r : references) {
    if (!(r.weight >= 0.0 && r.weight <= 1.0)) {
      throw Error(ErrorKind::kValidation, "reference weight outside [0, 1]");
    }
    any_positive = any_positive || r.weight > 0.0;
  }
  if (!any_positive) throw Error(ErrorKind::kMetric, "all references have zero weight");

  const auto hyp = tokenize_for_bleu(hypothesis, language);
  std::vector<std::vector<std::string>> refs;
  refs.reserve(references.size());
  for (const WeightedReference& r : references) refs.push_back(tokenize_for_bleu(r.text, language));

  BleuStats stats(max_n);
  for (int n = 1; n <= max_n; ++n) {
    const NgramCounts hyp_counts = count_ngrams(hyp, n);
    std::vector<NgramCounts> ref_counts;
    ref_counts.reserve(refs.size());
    for (const auto& r : refs) ref_counts.push_back(count_ngrams(r, n));
    double credit = 0.0;
    for (const auto& [gram, count] : hyp_counts) {
      int max_ref = 0;
      double max_weight = 0.0;
      for (std::size_t r = 0; r < ref_counts.size(); ++r) {
        auto it = ref_counts[r].find(gram);
        if (it == ref_counts[r].end()) continue;
        max_ref = std::max(max_ref, it->second);
        max_weight = std::max(max_weight, references[r].weight);
      }
      credit += std::min(count, max_ref) * max_weight;
    }
    stats.credit[static_cast<std::size_t>(n - 1)] = credit;
    stats.total[static_cast<std::size_t>(n - 1)] =
        static_cast<double>(std::max<long>(0, static_cast<long>(hyp.size()) - n + 1));
  }

  stats.hypothesis_length = static_cast<double>(hyp.size());
  std::size_t closest = refs.front().size();
  for (const auto& r : refs) {
    const auto diff = [&](std::size_t len) {
      return len > hyp.size() ? len - hyp.size() : hyp.size() - len;
    };
    if (diff(r.size()) < diff(closest) || (diff(r.size()) == diff(closest) && r.size() < closest)) {
      closest = r.size();
    }
  }
  stats.reference_length = static_cast<double>(closest);
  return stats;
}

double bleu_score(const BleuStats& stats) {
  if (stats.hypothesis_length <= 0.0 || stats.max_n() == 0) return 0.0;
  if (stats.credit[0] <= 0.0) return 0.0;
  double log_sum = 0.0;
  for (std::size_t n = 0; n < stats.credit.size(); ++n) {
    double precision;
    if (n == 0) {
      precision = stats.credit[0] / stats.total[0];
    } else {
      // Orders n >= 2 are floored at 1 / (total + 1).
      const double floor = 1.0 / (stats.total[n] + 1.0);
      precision = stats.total[n] > 0.0 ? std::max(stats.credit[n] / stats.total[n], floor) : floor;
    }
    log_sum += std::log(precision);
  }
  const double brevity =
      stats.hypothesis_length < stats.reference_length
          ? std::exp(1.0 - stats.reference_length / stats.hypothesis_length)
          : 1.0;
  return 100.0 * brevity * std::exp(log_sum / static_cast<double>(stats.max_n()));
}

double delta_bleu(std::string_view hypothesis, std::span<const WeightedReference> references,
                  Language language, int max_n) {
  return bleu_score(delta_bleu_stats(hypothesis, references, language, max_n));
}

double bert_score(std::string_view hypothesis, std::span<const WeightedReference> references,
                  Language language, const TextEncoderProvider& embedder) {
  if (references.empty()) throw Error(ErrorKind::kMetric, "no references to score against");
  if (hypothesis.empty()) return 0.0;
  try {
    const auto hyp_tokens = embedder.encode_tokens(hypothesis, language);
    const auto hyp_vector = hyp_tokens ? std::vector<double>{} : embedder.encode(hypothesis, language);
    double best = 0.0;
    for (const WeightedReference& r : references) {
      if (r.text.empty()) continue;
      double score;
      if (hyp_tokens) {
        auto ref_tokens = embedder.encode_tokens(r.text, language);
        if (!ref_tokens) throw Error(ErrorKind::kMetric, "embedder stopped producing tokens");
        score = greedy_f1(*hyp_tokens, *ref_tokens);
      } else {
        score = (cosine_similarity(hyp_vector, embedder.encode(r.text, language)) + 1.0) / 2.0;
      }
      best = std::max(best, std::clamp(score, 0.0, 1.0));
    }
    return best;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kMetric) throw;
    throw Error(ErrorKind::kMetric, "embedder '" + embedder.id() + "' failed: " + e.what());
  } catch (const std::exception& e) {
    throw Error(ErrorKind::kMetric, "embedder '" + embedder.id() + "' failed: " + e.what());
  }
}

std::vector<WeightedReference> references_of(const Encounter& encounter) {
  std::vector<WeightedReference> out;
  for (const GoldResponse& g : encounter.gold_responses) {
    std::string text = clean_text(g.text);
    if (text.empty()) continue;
    out.push_back(WeightedReference{std::move(text), std::clamp(g.weight.value_or(0.0), 0.0, 1.0)});
  }
  return out;
}

EvalReport evaluate_run(std::span<const PredictionRecord> predictions,
                        const std::map<Language, std::vector<Encounter>>& gold,
                        const EvalConfig& config, RunMetadata metadata) {
  if (config.embedder == nullptr) throw Error(ErrorKind::kConfig, "evaluation needs an embedder");
  if (config.languages.empty()) throw Error(ErrorKind::kConfig, "no evaluation languages");

  std::map<Language, std::map<std::string, const Encounter*, std::less<>>> index;
  for (Language language : config.languages) {
    auto& by_id = index[language];
    if (auto it = gold.find(language); it != gold.end()) {
      for (const Encounter& e : it->second) by_id[e.encounter_id] = &e;
    }
  }

  std::set<std::string> seen;
  std::set<std::string> offenders;
  std::vector<const PredictionRecord*> ordered;
  for (const PredictionRecord& p : predictions) {
    if (!seen.insert(p.encounter_id).second) offenders.insert(p.encounter_id + " (duplicate)");
    for (Language language : config.languages) {
      if (!index[language].contains(p.encounter_id)) {
        offenders.insert(p.encounter_id);
        break;
      }
    }
    ordered.push_back(&p);
  }
  if (!offenders.empty()) {
    std::string msg = "predictions reference unknown encounter ids:";
    for (const auto& id : offenders) msg += " " + id;
    throw Error(ErrorKind::kValidation, msg);
  }
  std::sort(ordered.begin(), ordered.end(),
            [](const auto* a, const auto* b) { return a->encounter_id < b->encounter_id; });

  EvalReport report;
  report.metadata = std::move(metadata);
  for (Language language : config.languages) {
    LanguageScores scores;
    BleuStats corpus(config.metric.max_n);
    double sentence_sum = 0.0;
    double bert_sum = 0.0;
    for (const PredictionRecord* p : ordered) {
      const Encounter& e = *index[language].at(p->encounter_id);
      const auto refs = references_of(e);
      const bool scorable =
          std::any_of(refs.begin(), refs.end(), [](const auto& r) { return r.weight > 0.0; });
      if (!scorable) {
        ++scores.n_unscorable;
        continue;
      }
      ++scores.n_instances;
      const std::string hypothesis = clean_text(p->response(language));
      const BleuStats stats =
          delta_bleu_stats(hypothesis, refs, language, config.metric.max_n);
      corpus += stats;
      sentence_sum += bleu_score(stats);
      if (hypothesis.empty()) {
        ++scores.n_empty;
        continue;  // contributes 0 to the semantic mean
      }
      try {
        bert_sum += bert_score(hypothesis, refs, language, *config.embedder);
      } catch (const Error& err) {
        ++scores.n_bertscore_failures;
        spdlog::warn("{} {}: {}", p->encounter_id, to_string(language), err.what());
      }
    }
    if (scores.n_unscorable > 0) {
      spdlog::warn("{}: {} encounter(s) without positively weighted gold were not scored",
                   to_string(language), scores.n_unscorable);
    }
    if (scores.n_bertscore_failures > 0) {
      spdlog::warn("{}: {} instance(s) excluded from the semantic score", to_string(language),
                   scores.n_bertscore_failures);
    }
    if (scores.n_instances > 0) {
      scores.deltableu = config.metric.aggregation == BleuAggregation::kCorpus
                             ? bleu_score(corpus)
                             : sentence_sum / static_cast<double>(scores.n_instances);
      const std::size_t scored = scores.n_instances - scores.n_bertscore_failures;
      scores.bertscore = scored > 0 ? bert_sum / static_cast<double>(scored) : 0.0;
    }
    report.languages[language] = scores;
  }
  return report;
}

json report_to_json(const EvalReport& report) {
  json scores = json::object();
  for (const auto& [language, s] : report.languages) {
    scores[std::string(to_string(language))] = {
        {"deltableu", s.deltableu},
        {"bertscore", s.bertscore},
        {"n_instances", s.n_instances},
        {"n_empty", s.n_empty},
        {"n_unscorable", s.n_unscorable},
        {"n_bertscore_failures", s.n_bertscore_failures},
    };
  }
  const RunMetadata& m = report.metadata;
  return json{{"model", m.model},
              {"mode", m.mode},
              {"backbone_id", m.backbone_id},
              {"providers", m.providers},
              {"seed", m.seed},
              {"timestamp", m.timestamp},
              {"scores", std::move(scores)}};
}

EvalReport report_from_json(const json& document) {
  try {
    EvalReport report;
    RunMetadata& m = report.metadata;
    m.model = document.at("model").get<std::string>();
    m.mode = document.at("mode").get<std::string>();
    m.backbone_id = document.at("backbone_id").get<std::string>();
    m.providers = document.at("providers").get<std::map<std::string, std::string>>();
    m.seed = document.at("seed").get<std::uint64_t>();
    m.timestamp = document.at("timestamp").get<std::string>();
    for (const auto& [key, value] : document.at("scores").items()) {
      LanguageScores s;
      s.deltableu = value.at("deltableu").get<double>();
      s.bertscore = value.at("bertscore").get<double>();
      s.n_instances = value.at("n_instances").get<std::size_t>();
      s.n_empty = value.value("n_empty", std::size_t{0});
      s.n_unscorable = value.value("n_unscorable", std::size_t{0});
      s.n_bertscore_failures = value.value("n_bertscore_failures", std::size_t{0});
      report.languages[parse_language(key)] = s;
    }
    return report;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kValidation, std::string("malformed report: ") + e.what());
  }
}

std::string format_report_table(std::span<const EvalReport> reports) {
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"Model", "deltaBLEU", "", "", "BERTScore", "", ""});
  rows.push_back({"", "en", "zh", "es", "en", "zh", "es"});
  for (const EvalReport& report : reports) {
    std::vector<std::string> row{report.metadata.model};
    for (int metric = 0; metric < 2; ++metric) {
      for (Language language : kAllLanguages) {
        auto it = report.languages.find(language);
        if (it == report.languages.end()) {
          row.push_back("-");
        } else {
          row.push_back(fixed3(metric == 0 ? it->second.deltableu : it->second.bertscore));
        }
      }
    }
    rows.push_back(std::move(row));
  }
  std::vector<std::size_t> widths(7, 0);
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) widths[c] = std::max(widths[c], row[c].size());
  }
  std::ostringstream out;
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c == 1 || c == 4) line += " |";
      line += c == 0 ? "" : " ";
      std::string cell = row[c];
      cell.resize(widths[c], ' ');
      line += cell;
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out << line << "\n";
  }
  return out.str();
}

}  // namespace medifact
