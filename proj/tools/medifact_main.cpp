// Copyright 2026 The MediFact Authors
// SPDX-License-Identifier: Apache-2.0

// medifact: stage-by-stage driver for the answer generation pipeline.
//
//   medifact ingest   --config run.json
//   medifact train    --config run.json [--backbone ID] [--sweep]
//   medifact generate --config run.json [--mode individual|translated]
//   medifact evaluate --config run.json [--predictions FILE]
//   medifact report   --config run.json

#include <spdlog/spdlog.h>
#include <spdlog/sinks/stdout_color_sinks.h>

#include <CLI11.hpp>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "medifact/config.hpp"
#include "medifact/error.hpp"
#include "medifact/hashing.hpp"
#include "medifact/pipeline.hpp"

namespace {

struct Flags {
  std::string config;
  std::string mode;
  std::string backbone;
  std::optional<std::uint64_t> seed;
  std::string predictions;
  bool force = false;
  bool sweep = false;
  bool verbose = false;
};

medifact::PipelineConfig load(const Flags& flags) {
  medifact::PipelineConfig config = medifact::load_config(flags.config);
  if (!flags.backbone.empty()) config.backbone = flags.backbone;
  if (!flags.mode.empty()) {
    config = medifact::with_mode(std::move(config), medifact::parse_selection_mode(flags.mode));
  }
  if (flags.seed) {
    config.seed = *flags.seed;
    config.training.seed = *flags.seed;
  }
  config.validate();
  return config;
}

// The configs a command runs over: one, or every backbone x mode with --sweep.
std::vector<medifact::PipelineConfig> expand(const Flags& flags, bool over_modes) {
  medifact::PipelineConfig base = load(flags);
  if (!flags.sweep) return {base};
  const auto providers = medifact::ProviderSet::from_config(base);
  std::vector<medifact::SelectionMode> modes{base.mode};
  if (over_modes && flags.mode.empty()) {
    modes = {medifact::SelectionMode::kIndividual, medifact::SelectionMode::kTranslated};
  }
  std::vector<medifact::PipelineConfig> out;
  for (const std::string& id : providers.backbones.ids()) {
    for (medifact::SelectionMode mode : modes) {
      out.push_back(medifact::with_mode(medifact::with_backbone(base, id), mode));
    }
  }
  return out;
}

void print(const medifact::StageResult& result, const std::string& stage) {
  if (result.skipped) {
    std::cout << stage << ": up to date\n";
  } else {
    for (const auto& path : result.outputs) std::cout << stage << ": wrote " << path.string() << "\n";
  }
  if (result.warnings > 0) std::cout << stage << ": " << result.warnings << " warning(s)\n";
}

int run(const std::function<void()>& body) {
  try {
    body();
    return medifact::kExitOk;
  } catch (const medifact::Error& e) {
    spdlog::error("{}", e.what());
    return medifact::exit_code_for(e.kind());
  } catch (const std::filesystem::filesystem_error& e) {
    spdlog::error("{}", e.what());
    return medifact::kExitIo;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return medifact::kExitValidation;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multilingual multimodal medical answer generation pipeline"};
  app.require_subcommand(1);
  Flags flags;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", flags.config, "Pipeline config (JSON)")->required();
    cmd->add_option("--backbone", flags.backbone, "Image backbone id");
    cmd->add_option("--mode", flags.mode, "Selection mode")
        ->check(CLI::IsMember({"individual", "translated"}));
    cmd->add_option("--seed", flags.seed, "Override the config seed");
    cmd->add_flag("--force", flags.force, "Rerun even when up to date");
    cmd->add_flag("-v,--verbose", flags.verbose, "Log progress");
  };

  CLI::App* ingest = app.add_subcommand("ingest", "Clean and weight the encounter files");
  CLI::App* train = app.add_subcommand("train", "Train one classifier per language");
  CLI::App* generate = app.add_subcommand("generate", "Generate and select responses");
  CLI::App* evaluate = app.add_subcommand("evaluate", "Score a prediction file");
  CLI::App* report = app.add_subcommand("report", "Tabulate all evaluation reports");
  for (CLI::App* cmd : {ingest, train, generate, evaluate, report}) add_common(cmd);
  for (CLI::App* cmd : {train, generate, evaluate}) {
    cmd->add_flag("--sweep", flags.sweep, "Run for every registered backbone (and mode)");
  }
  evaluate->add_option("--predictions", flags.predictions, "Prediction file to score");

  CLI11_PARSE(app, argc, argv);
  spdlog::set_default_logger(spdlog::stderr_color_mt("medifact"));
  spdlog::set_level(flags.verbose ? spdlog::level::info : spdlog::level::warn);
  const medifact::StageOptions options{flags.force};

  return run([&] {
    if (ingest->parsed()) {
      print(medifact::Pipeline(load(flags)).ingest(options), "ingest");
    } else if (train->parsed()) {
      for (const auto& config : expand(flags, false)) {
        print(medifact::Pipeline(config).train(options), "train");
      }
    } else if (generate->parsed()) {
      for (const auto& config : expand(flags, true)) {
        print(medifact::Pipeline(config).generate(options), "generate");
      }
    } else if (evaluate->parsed()) {
      std::optional<std::filesystem::path> predictions;
      if (!flags.predictions.empty()) predictions = flags.predictions;
      for (const auto& config : expand(flags, true)) {
        print(medifact::Pipeline(config).evaluate(options, predictions), "evaluate");
      }
    } else if (report->parsed()) {
      medifact::Pipeline pipeline(load(flags));
      print(pipeline.report(options), "report");
      std::cout << medifact::read_file(pipeline.config().output_dir / "reports" / "summary.txt");
    }
  });
}
