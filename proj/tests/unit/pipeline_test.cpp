// Copyright 2026 The MediFact Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <fstream>

#include <nlohmann/json.hpp>

#include "medifact/config.hpp"
#include "medifact/error.hpp"
#include "medifact/hashing.hpp"
#include "medifact/image_io.hpp"
#include "medifact/pipeline.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using medifact::Error;
using medifact::ErrorKind;
using medifact::Language;
using medifact::Pipeline;
using nlohmann::json;

namespace {

json read_json(const fs::path& p) { return json::parse(medifact::read_file(p)); }
void write_json(const fs::path& p, const json& j) { medifact::write_file(p, j.dump(1)); }

void edit_config(const fs::path& config, const std::function<void(json&)>& edit) {
  json doc = read_json(config);
  edit(doc);
  write_json(config, doc);
}

Pipeline pipeline_for(const fs::path& config) { return Pipeline(medifact::load_config(config)); }

void run_all(Pipeline& p, bool force = false) {
  p.ingest({force});
  p.train({force});
  p.generate({force});
  p.evaluate({force});
}

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::kIo;
}

#ifdef MEDIFACT_CLI
int run_cli(const std::string& args) {
  const std::string command = std::string(MEDIFACT_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}
#endif

std::vector<std::string> utf8_chars(const std::string& text) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < text.size();) {
    const auto lead = static_cast<unsigned char>(text[i]);
    const std::size_t len = lead < 0x80 ? 1 : lead < 0xE0 ? 2 : lead < 0xF0 ? 3 : 4;
    if (text[i] != ' ') out.push_back(text.substr(i, len));
    i += len;
  }
  return out;
}

}  // namespace

TEST_CASE("ingest writes weighted datasets and is restartable") {
  testing_support::TempDir dir;
  const fs::path config = testing_support::copy_fixture(dir.path());
  Pipeline p = pipeline_for(config);
  const auto result = p.ingest();
  CHECK_FALSE(result.skipped);
  const json train = read_json(p.dataset_path("train", Language::kEn));
  CHECK(train.size() == 10);
  for (const json& e : train) {
    for (const json& r : e["responses"]) CHECK(r.contains("weight"));
    CHECK(e["responses"][0]["weight"] == 1.0);                        // MD, long answer
    CHECK(e["responses"][1]["weight"].get<double>() < 1.0);           // nurse practitioner
  }
  const std::string hash = medifact::sha256_file(p.dataset_path("train", Language::kZh));
  CHECK(p.ingest().skipped);
  CHECK_FALSE(p.ingest({true}).skipped);
  CHECK(medifact::sha256_file(p.dataset_path("train", Language::kZh)) == hash);
  CHECK(fs::exists(dir.path() / "out" / "manifest.json"));
}

TEST_CASE("ingest names a missing authors file") {
  testing_support::TempDir dir;
  const fs::path config = testing_support::copy_fixture(dir.path());
  fs::remove(dir.path() / "authors.csv");
  Pipeline p = pipeline_for(config);
  try {
    p.ingest();
    FAIL("expected an io error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kIo);
    CHECK(std::string(e.what()).find("authors.csv") != std::string::npos);
  }
#ifdef MEDIFACT_CLI
  CHECK(run_cli("ingest --config " + config.string()) == 2);
#endif
}

TEST_CASE("train writes one bit-identical model per language") {
  testing_support::TempDir dir;
  Pipeline p = pipeline_for(testing_support::copy_fixture(dir.path()));
  p.ingest();
  CHECK_THROWS_AS(Pipeline(p.config()).generate(), Error);  // models missing
  const auto result = p.train();
  CHECK(result.outputs.size() == 3);
  std::map<Language, std::string> hashes;
  for (Language l : medifact::kAllLanguages) {
    REQUIRE(fs::exists(p.model_path(l)));
    hashes[l] = medifact::sha256_file(p.model_path(l));
    CHECK(read_json(p.model_path(l))["label_space"].size() == 3);
  }
  CHECK(p.train().skipped);
  p.train({true});
  for (Language l : medifact::kAllLanguages) CHECK(medifact::sha256_file(p.model_path(l)) == hashes[l]);
}

TEST_CASE("single-class training data names the language") {
  testing_support::TempDir dir;
  const fs::path config = testing_support::copy_fixture(dir.path());
  json es = read_json(dir.path() / "train.es.json");
  for (json& e : es) e["responses"][0]["text"] = es[0]["responses"][0]["text"];
  write_json(dir.path() / "train.es.json", es);
  Pipeline p = pipeline_for(config);
  p.ingest();
  try {
    p.train();
    FAIL("expected a degenerate-data error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kDegenerateData);
    CHECK(std::string(e.what()).find("es") != std::string::npos);
  }
}

TEST_CASE("generate emits every test encounter with all language keys") {
  testing_support::TempDir dir;
  Pipeline p = pipeline_for(testing_support::copy_fixture(dir.path()));
  p.ingest();
  p.train();
  const auto result = p.generate();
  CHECK(result.warnings == 0);
  const json predictions = read_json(p.predictions_path());
  REQUIRE(predictions.size() == 5);
  for (const json& record : predictions) {
    for (const char* l : {"en", "zh", "es"}) {
      REQUIRE(record["responses"].contains(l));
      CHECK_FALSE(record["responses"][l].get<std::string>().empty());
    }
  }
  // test-04 has no images
  CHECK(predictions[3]["encounter_id"] == "test-04");
  const std::string hash = medifact::sha256_file(p.predictions_path());
  CHECK(p.generate().skipped);
  p.generate({true});
  CHECK(medifact::sha256_file(p.predictions_path()) == hash);
}

TEST_CASE("evaluate scores gold-as-predictions at 100") {
  testing_support::TempDir dir;
  Pipeline p = pipeline_for(testing_support::copy_fixture(dir.path()));
  p.ingest();
  json predictions = json::array();
  const json en = read_json(p.dataset_path("test", Language::kEn));
  for (std::size_t i = 0; i < en.size(); ++i) {
    json responses = json::object();
    for (Language l : medifact::kAllLanguages) {
      responses[std::string(medifact::to_string(l))] =
          read_json(p.dataset_path("test", l))[i]["responses"][0]["text"];
    }
    predictions.push_back({{"encounter_id", en[i]["encounter_id"]}, {"responses", responses}});
  }
  write_json(dir.path() / "gold.json", predictions);
  p.evaluate({}, dir.path() / "gold.json");
  const json report = read_json(dir.path() / "out" / "reports" / "gold.json");
  for (const char* l : {"en", "zh", "es"}) {
    CHECK(report["scores"][l]["deltableu"].get<double>() == doctest::Approx(100.0).epsilon(1e-12));
  }
}

TEST_CASE("evaluate rejects unknown encounters") {
  testing_support::TempDir dir;
  const fs::path config = testing_support::copy_fixture(dir.path());
  Pipeline p = pipeline_for(config);
  p.ingest();
  write_json(dir.path() / "bad.json",
             json::parse(R"([{"encounter_id":"ghost","responses":{"en":"x","zh":"","es":""}}])"));
  CHECK(kind_of([&] { p.evaluate({}, dir.path() / "bad.json"); }) == ErrorKind::kValidation);
  CHECK(kind_of([&] { p.evaluate({}, dir.path() / "absent.json"); }) == ErrorKind::kIo);
#ifdef MEDIFACT_CLI
  CHECK(run_cli("evaluate --config " + config.string() + " --predictions " +
                (dir.path() / "bad.json").string()) == 1);
#endif
}

TEST_CASE("fixture report equals oracle-computed values") {
  testing_support::TempDir dir;
  Pipeline p = pipeline_for(testing_support::copy_fixture(dir.path()));
  run_all(p);
  const json predictions = read_json(p.predictions_path());
  const json report = read_json(p.report_path(".json"));
  for (Language l : medifact::kAllLanguages) {
    const std::string code(medifact::to_string(l));
    const json gold = read_json(p.dataset_path("test", l));
    oracle::Counts corpus;
    for (const json& record : predictions) {
      const json* encounter = nullptr;
      for (const json& g : gold) {
        if (g["encounter_id"] == record["encounter_id"]) encounter = &g;
      }
      REQUIRE(encounter != nullptr);
      auto tokens = [&](const std::string& s) {
        return l == Language::kZh ? utf8_chars(s) : oracle::ascii_tokens(s);
      };
      std::vector<oracle::Ref> refs;
      for (const json& r : (*encounter)["responses"]) {
        refs.push_back({tokens(r["text"].get<std::string>()), r["weight"].get<double>()});
      }
      oracle::accumulate(corpus, oracle::bleu_counts(tokens(record["responses"][code].get<std::string>()), refs, 4));
    }
    CAPTURE(code);
    CHECK(std::abs(report["scores"][code]["deltableu"].get<double>() - oracle::bleu_from_counts(corpus)) < 1e-9);
    CHECK(report["scores"][code]["n_instances"] == 5);
  }
  CHECK(report["seed"] == 7);
  CHECK(report["backbone_id"] == "stub");
  CHECK(report["mode"] == "individual");
  CHECK(report["providers"]["generator"] == "stub");
}

TEST_CASE("evaluate refuses predictions made from a different dataset") {
  testing_support::TempDir dir;
  Pipeline p = pipeline_for(testing_support::copy_fixture(dir.path()));
  run_all(p);
  json en = read_json(dir.path() / "test.en.json");
  en[0]["responses"][0]["text"] = "A completely different gold answer written by the doctor for this case today.";
  write_json(dir.path() / "test.en.json", en);
  p.ingest();
  CHECK(kind_of([&] { p.evaluate({true}); }) == ErrorKind::kValidation);
  p.generate();
  CHECK_NOTHROW(p.evaluate());
}

TEST_CASE("non-participating languages are empty and score zero") {
  testing_support::TempDir dir;
  const fs::path config = testing_support::copy_fixture(dir.path());
  edit_config(config, [](json& c) { c["languages"] = {"zh"}; });
  Pipeline p = pipeline_for(config);
  run_all(p);
  const json predictions = read_json(p.predictions_path());
  for (const json& record : predictions) {
    CHECK(record["responses"]["en"] == "");
    CHECK(record["responses"]["es"] == "");
    CHECK(record["responses"]["zh"] != "");
  }
  // Scoring the same file against all three languages counts the blanks.
  edit_config(config, [](json& c) { c["languages"] = {"en", "zh", "es"}; });
  Pipeline all = pipeline_for(config);
  all.ingest();
  all.evaluate({}, p.predictions_path());
  const json report = read_json(all.report_path(".json"));
  CHECK(report["scores"]["en"]["deltableu"] == 0.0);
  CHECK(report["scores"]["en"]["n_instances"] == 5);
  CHECK(report["scores"]["en"]["n_empty"] == 5);
  CHECK(report["scores"]["zh"]["deltableu"].get<double>() > 0.0);
}

TEST_CASE("translated mode emits pivot text and tagged translations") {
  testing_support::TempDir dir;
  const fs::path config = testing_support::copy_fixture(dir.path());
  Pipeline p(medifact::with_mode(medifact::load_config(config), medifact::SelectionMode::kTranslated));
  CHECK(p.run_label() == "stub-Translated");
  run_all(p);
  for (const json& record : read_json(p.predictions_path())) {
    const std::string zh = record["responses"]["zh"];
    CHECK(record["responses"]["en"] == "[en] " + zh);
    CHECK(record["responses"]["es"] == "[es] " + zh);
  }
}

TEST_CASE("config validation") {
  testing_support::TempDir dir;
  const fs::path config = testing_support::copy_fixture(dir.path());
  edit_config(config, [](json& c) {
    c["mode"] = "translated";
    c.erase("pivot");
  });
  CHECK(kind_of([&] { medifact::load_config(config); }) == ErrorKind::kConfig);
  edit_config(config, [](json& c) {
    c["mode"] = "individual";
    c["languages"] = json::array();
  });
  CHECK(kind_of([&] { medifact::load_config(config); }) == ErrorKind::kConfig);
  edit_config(config, [](json& c) {
    c["languages"] = {"en"};
    c["providers"] = {{"generator", "gpt-nonexistent"}};
  });
  Pipeline p = pipeline_for(config);
  p.ingest();
  p.train();
  CHECK(kind_of([&] { p.generate(); }) == ErrorKind::kRegistry);
  CHECK(kind_of([] { medifact::load_config("/nonexistent/config.json"); }) == ErrorKind::kIo);
}

TEST_CASE("exit codes follow the error kind") {
  CHECK(medifact::exit_code_for(ErrorKind::kValidation) == 1);
  CHECK(medifact::exit_code_for(ErrorKind::kSchema) == 1);
  CHECK(medifact::exit_code_for(ErrorKind::kConfig) == 1);
  CHECK(medifact::exit_code_for(ErrorKind::kIo) == 2);
  CHECK(medifact::exit_code_for(ErrorKind::kProvider) == 3);
  CHECK(medifact::exit_code_for(ErrorKind::kTranslation) == 3);
  CHECK(medifact::exit_code_for(ErrorKind::kGeneration) == 3);
}

#ifdef MEDIFACT_CLI
TEST_CASE("cli sweep regenerates a backbone comparison") {
  testing_support::TempDir dir;
  const fs::path config = testing_support::copy_fixture(dir.path());
  // Precomputed features for a second backbone.
  json features = json::object();
  const medifact::ImageStore store(dir.path() / "images");
  for (const auto& entry : fs::directory_iterator(dir.path() / "images")) {
    const auto image = store.load(entry.path().filename().string());
    double mean = 0.0;
    for (auto px : image.pixels) mean += px / 255.0;
    features[entry.path().filename().string()] = {mean / image.pixels.size(), image.gray(0, 0),
                                                  image.gray(image.width - 1, 0), image.gray(0, image.height - 1)};
  }
  write_json(dir.path() / "vgg16.json", {{"dim", 4}, {"features", features}});
  edit_config(config, [](json& c) {
    c["backbones"] = {{{"id", "vgg16"}, {"features", "vgg16.json"}}};
    c["selection_backbone"] = "stub";
  });
  const std::string flag = " --config " + config.string();
  CHECK(run_cli("ingest" + flag) == 0);
  CHECK(run_cli("train --sweep" + flag) == 0);
  CHECK(run_cli("generate --sweep" + flag) == 0);
  CHECK(run_cli("evaluate --sweep" + flag) == 0);
  CHECK(run_cli("report" + flag) == 0);
  const json summary = read_json(dir.path() / "out" / "reports" / "summary.json");
  std::vector<std::string> rows;
  for (const json& r : summary) rows.push_back(r["model"]);
  CHECK(rows == std::vector<std::string>{"stub-Individual", "stub-Translated", "vgg16-Individual",
                                         "vgg16-Translated"});
  CHECK(run_cli("generate --seed 11 --backbone vgg16" + flag) == 0);
  CHECK(run_cli("generate --mode sideways" + flag) != 0);
  CHECK(run_cli("generate --backbone inception9" + flag) == 1);
}
#endif
