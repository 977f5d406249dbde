// Copyright 2026 The DFL-SFGE Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line driver. Exit codes: 0 success, 2 configuration or input
// error, 3 solver failure, 4 at least one failed cell.

#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dfl/errors.h"
#include "dfl/experiment.h"
#include "dfl/serialization.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitPartial = 4;

struct CommonFlags {
  std::string config_path;
  std::string benchmark;
  std::optional<std::uint64_t> seed;
  bool paper_scale = false;
  std::optional<int> workers;
  std::string out;
};

void AddCommonFlags(CLI::App* cmd, CommonFlags& f, bool with_workers) {
  cmd->add_option("--config", f.config_path, "Experiment config (JSON)");
  cmd->add_option("--benchmark", f.benchmark,
                  "Preset name when no config is given");
  cmd->add_option("--seed", f.seed, "Master seed override");
  cmd->add_flag("--paper-scale", f.paper_scale, "Use full-size instances");
  if (with_workers) {
    cmd->add_option("--workers", f.workers, "Worker threads (0: all cores)");
  }
  cmd->add_option("--out", f.out, "Output directory");
}

dfl::ExperimentConfig LoadConfig(const CommonFlags& f) {
  dfl::Json j = dfl::Json::object();
  if (!f.config_path.empty()) {
    try {
      j = dfl::Json::parse(dfl::ReadFile(f.config_path));
    } catch (const dfl::Json::parse_error& e) {
      dfl::Fail(dfl::ErrorCode::kConfigError,
                f.config_path + ": " + e.what());
    }
  }
  if (!f.benchmark.empty()) j["benchmark"] = f.benchmark;
  if (f.seed) j["seed"] = *f.seed;
  if (f.workers) j["workers"] = *f.workers;
  if (!f.out.empty()) j["output_dir"] = f.out;
  return dfl::ExperimentConfigFromJson(j, f.paper_scale);
}

std::filesystem::path PrepareOutputDir(const dfl::ExperimentConfig& config) {
  std::filesystem::path dir(config.output_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    dfl::Fail(dfl::ErrorCode::kConfigError,
              "cannot create " + dir.string() + ": " + ec.message());
  }
  dfl::WriteFile((dir / "config.json").string(),
                 dfl::ToJson(config).dump(2) + "\n");
  return dir;
}

int RunGen(const CommonFlags& flags) {
  const dfl::ExperimentConfig config = LoadConfig(flags);
  const auto dir = PrepareOutputDir(config);
  for (int d = 0; d < config.n_datasets; ++d) {
    const dfl::Dataset ds = dfl::BuildDataset(
        config.gen, config.kind, dfl::DatasetSeed(config.seed, d));
    const auto path = dir / ("dataset_" + std::to_string(d) + ".jsonl");
    dfl::WriteDataset(ds, path.string());
    std::cerr << "wrote " << path.string() << "\n";
  }
  return kExitOk;
}

struct TrainFlags {
  std::string method = "sfge";
  double rho = 0.0;
  int dataset_index = 0;
  int split_index = 0;
};

int RunTrain(const CommonFlags& flags, const TrainFlags& tf) {
  const dfl::ExperimentConfig config = LoadConfig(flags);
  const auto method = dfl::ParseMethod(tf.method);
  if (!method) {
    dfl::Fail(dfl::ErrorCode::kConfigError, "unknown method " + tf.method);
  }
  const auto dir = PrepareOutputDir(config);
  const dfl::CellOutput cell = dfl::RunCell(
      config, *method, tf.rho, dfl::DatasetSeed(config.seed, tf.dataset_index),
      dfl::SplitSeed(config.seed, tf.split_index));
  const std::vector<dfl::RunRecord> records = {cell.record};
  dfl::WriteFile((dir / "runs.csv").string(), dfl::RunRecordsToCsv(records));
  if (cell.checkpoint) {
    dfl::WriteFile((dir / "checkpoint.json").string(),
                   dfl::ToJson(*cell.checkpoint).dump() + "\n");
  }
  std::cout << dfl::RunRecordsToCsv(records);
  return cell.record.ok() ? kExitOk : kExitPartial;
}

int RunSweepCommand(const CommonFlags& flags) {
  const dfl::ExperimentConfig config = LoadConfig(flags);
  const auto dir = PrepareOutputDir(config);
  const auto partial = (dir / "runs.partial.csv").string();
  dfl::WriteFile(partial, "");
  std::FILE* log = std::fopen(partial.c_str(), "a");
  const auto records =
      dfl::RunSweep(config, [&](const dfl::RunRecord& r) {
        std::cerr << r.method << " rho=" << r.rho << " dataset=" << r.dataset_seed
                  << " split=" << r.split_seed << " " << r.status
                  << " rel_pregret=" << r.rel_pregret << "\n";
        if (log != nullptr) {
          const std::vector<dfl::RunRecord> one = {r};
          const std::string csv = dfl::RunRecordsToCsv(one);
          const std::string row = csv.substr(csv.find('\n') + 1);
          std::fputs(row.c_str(), log);
          std::fflush(log);
        }
      });
  if (log != nullptr) std::fclose(log);
  dfl::WriteFile((dir / "runs.csv").string(), dfl::RunRecordsToCsv(records));
  std::filesystem::remove(partial);
  bool any_failed = false;
  bool any_ok = false;
  for (const auto& r : records) {
    any_failed |= !r.ok();
    any_ok |= r.ok();
  }
  if (any_ok) {
    const auto tables = dfl::AggregateTables(records);
    dfl::WriteFile((dir / "tables.csv").string(), dfl::TablesToCsv(tables));
    std::cout << dfl::TablesToCsv(tables);
  }
  return any_failed ? kExitPartial : kExitOk;
}

int RunSaa(const CommonFlags& flags, std::optional<double> rho) {
  const dfl::ExperimentConfig config = LoadConfig(flags);
  const auto dir = PrepareOutputDir(config);
  const std::vector<double> rhos =
      rho ? std::vector<double>{*rho} : config.rho_grid;
  dfl::Json cells = dfl::Json::array();
  std::vector<dfl::SaaCell> parsed;
  int hits = 0;
  for (double r : rhos) {
    for (int d = 0; d < config.n_datasets; ++d) {
      for (int s = 0; s < config.n_splits; ++s) {
        dfl::SaaCell cell =
            dfl::RunSaaCell(config, r, dfl::DatasetSeed(config.seed, d),
                            dfl::SplitSeed(config.seed, s));
        for (const auto& p : cell.points) hits += p.time_limit_hits;
        std::cerr << "saa rho=" << r << " dataset=" << d << " split=" << s
                  << " done\n";
        cells.push_back(dfl::ToJson(cell));
        parsed.push_back(std::move(cell));
      }
    }
  }
  dfl::WriteFile((dir / "saa.json").string(), cells.dump(2) + "\n");
  dfl::WriteFile((dir / "plotdata.json").string(),
                 dfl::EmitPlotdata(parsed).dump(2) + "\n");
  if (hits > 0) {
    std::cerr << hits << " extensive-form solves hit the time limit\n";
  }
  return kExitOk;
}

int RunReport(const std::string& in, const std::string& out) {
  const auto records = dfl::RunRecordsFromCsv(dfl::ReadFile(in));
  const std::string csv = dfl::TablesToCsv(dfl::AggregateTables(records));
  if (out.empty()) {
    std::cout << csv;
  } else {
    dfl::WriteFile(out, csv);
  }
  return kExitOk;
}

int RunPlotdata(const std::string& in, const std::string& out) {
  dfl::Json j;
  try {
    j = dfl::Json::parse(dfl::ReadFile(in));
  } catch (const dfl::Json::parse_error& e) {
    dfl::Fail(dfl::ErrorCode::kConfigError, in + ": " + e.what());
  }
  if (!j.is_array()) {
    dfl::Fail(dfl::ErrorCode::kConfigError, in + ": expected a JSON array");
  }
  std::vector<dfl::SaaCell> cells;
  for (const auto& c : j) cells.push_back(dfl::SaaCellFromJson(c));
  const std::string text = dfl::EmitPlotdata(cells).dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
  } else {
    dfl::WriteFile(out, text);
  }
  return kExitOk;
}

int ExitCodeFor(dfl::ErrorCode code) {
  switch (code) {
    case dfl::ErrorCode::kSolverFailure:
    case dfl::ErrorCode::kNumericalFailure:
    case dfl::ErrorCode::kCapExceeded:
    case dfl::ErrorCode::kInternal:
      return kExitSolver;
    default:
      return kExitConfig;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decision-focused learning experiments"};
  app.require_subcommand(1);

  CommonFlags gen_flags, train_flags, sweep_flags, saa_flags;
  TrainFlags tf;
  std::optional<double> saa_rho;
  std::string report_in, report_out, plot_in, plot_out;

  auto* gen = app.add_subcommand("gen", "Generate datasets");
  AddCommonFlags(gen, gen_flags, false);

  auto* train = app.add_subcommand("train", "Train and evaluate one cell");
  AddCommonFlags(train, train_flags, false);
  train->add_option("--method", tf.method, "sfge, sfge_map, pfl_mse, "
                                           "pfl_nll or spo_plus");
  train->add_option("--rho", tf.rho, "Penalty factor");
  train->add_option("--dataset-index", tf.dataset_index)->check(
      CLI::NonNegativeNumber);
  train->add_option("--split-index", tf.split_index)->check(
      CLI::NonNegativeNumber);

  auto* sweep = app.add_subcommand("sweep", "Run every configured cell");
  AddCommonFlags(sweep, sweep_flags, true);

  auto* saa = app.add_subcommand("saa", "PFL+SAA inference sweep over K");
  AddCommonFlags(saa, saa_flags, false);
  saa->add_option("--rho", saa_rho, "Single penalty factor");

  auto* report = app.add_subcommand("report", "Aggregate runs.csv into tables");
  report->add_option("--in", report_in, "runs.csv")->required();
  report->add_option("--out", report_out, "Output CSV (default stdout)");

  auto* plot = app.add_subcommand("plotdata", "Plot series from saa.json");
  plot->add_option("--in", plot_in, "saa.json")->required();
  plot->add_option("--out", plot_out, "Output JSON (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (gen->parsed()) return RunGen(gen_flags);
    if (train->parsed()) return RunTrain(train_flags, tf);
    if (sweep->parsed()) return RunSweepCommand(sweep_flags);
    if (saa->parsed()) return RunSaa(saa_flags, saa_rho);
    if (report->parsed()) return RunReport(report_in, report_out);
    if (plot->parsed()) return RunPlotdata(plot_in, plot_out);
  } catch (const dfl::DflError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ExitCodeFor(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolver;
  }
  return kExitConfig;
}
