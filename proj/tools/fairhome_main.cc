// Copyright 2026 The FairHOME Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// fairhome: run experiments, rebuild report tables, score prediction files.
//
//   fairhome run --config configs/german_lr.json [--seed N] [--reps N]
//                [--out DIR] [--paper-arch]
//   fairhome report --in DIR [--in DIR ...] --out DIR
//   fairhome metrics --predictions preds.csv [--protected a,b] [--out file]

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fairhome/csv.h"
#include "fairhome/data.h"
#include "fairhome/error.h"
#include "fairhome/metrics.h"
#include "fairhome/runner.h"

namespace {

namespace fs = std::filesystem;
using fairhome::Error;
using fairhome::ErrorCode;

constexpr int kExitError = 1;
constexpr int kExitUsage = 2;

int ParseLabel(const std::string& text, const char* column, std::size_t line) {
  if (text == "0") return 0;
  if (text == "1") return 1;
  throw Error(ErrorCode::kData, std::string(column) + " on line " +
                                    std::to_string(line) +
                                    " must be 0 or 1, got '" + text + "'");
}

fairhome::LabeledPredictions ReadPredictions(
    const fs::path& path, std::vector<std::string> protected_names) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read '" + path.string() + "'");
  const auto header_row = fairhome::csv::ReadRow(in);
  if (!header_row)
    throw Error(ErrorCode::kData, "'" + path.string() + "' is empty");
  const std::vector<std::string>& header = *header_row;
  auto column = [&](const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    throw Error(ErrorCode::kSchema, "missing column '" + name + "'");
  };
  const std::size_t y_true = column("y_true");
  const std::size_t y_pred = column("y_pred");
  if (protected_names.empty()) {
    for (const auto& name : header) {
      if (name != "y_true" && name != "y_pred") protected_names.push_back(name);
    }
  }
  if (protected_names.empty()) {
    throw Error(ErrorCode::kSchema, "no protected attribute columns");
  }
  std::vector<std::size_t> protected_columns;
  for (const auto& name : protected_names) {
    protected_columns.push_back(column(name));
  }

  fairhome::LabeledPredictions data;
  for (const auto& name : protected_names) {
    data.single_group_of.emplace_back(name, std::vector<std::string>{});
  }
  std::size_t line = 1;
  while (auto next = fairhome::csv::ReadRow(in)) {
    const auto& row = *next;
    ++line;
    if (row.size() == 1 && row[0].empty()) continue;
    if (row.size() != header.size()) {
      throw Error(ErrorCode::kData,
                  "line " + std::to_string(line) + " has the wrong width");
    }
    data.y_true.push_back(ParseLabel(row[y_true], "y_true", line));
    data.y_pred.push_back(ParseLabel(row[y_pred], "y_pred", line));
    fairhome::SubgroupKey key;
    for (std::size_t k = 0; k < protected_columns.size(); ++k) {
      const std::string& value = row[protected_columns[k]];
      key.assignment.emplace_back(protected_names[k], value);
      data.single_group_of[k].second.push_back(value);
    }
    data.subgroup_of.push_back(std::move(key));
  }
  if (data.size() == 0) throw Error(ErrorCode::kData, "no prediction rows");
  return data;
}

void PrintWarnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

int RunCommand(const fs::path& config_path,
               const std::optional<std::uint64_t>& seed,
               const std::optional<int>& reps,
               const std::optional<fs::path>& out, bool deep_layout) {
  fairhome::ExperimentConfig config =
      fairhome::LoadExperimentConfig(config_path);
  if (seed) config.base_seed = *seed;
  if (reps) config.repetitions = *reps;
  if (out) config.output_dir = *out;
  if (deep_layout) config.mlp_layout = fairhome::DeepMlpLayout();
  config.Validate();

  const auto result = fairhome::RunExperiment(config);
  PrintWarnings(result.warnings);
  const auto cases =
      fairhome::ClassifyTradeoffs(result.records, result.baselines);
  const auto wtl =
      fairhome::ComputeWinTieLoss(result.records, "fairhome", config.alpha);
  fairhome::EmitReport(result.records, result.baselines, cases, wtl,
                       config.output_dir);
  fairhome::WriteRunManifest(config, result, config.output_dir);

  int failed = 0;
  for (const auto& r : result.records) {
    if (!r.ok) {
      ++failed;
      std::cerr << "error: " << r.task << "/" << r.method << "/rep"
                << r.repetition << ": " << r.error << "\n";
    }
  }
  std::cout << "wrote " << result.records.size() << " records to "
            << config.output_dir.string() << "\n";
  for (const auto& d : fairhome::SummarizeRegions(cases)) {
    std::cout << "  " << d.method << ": " << std::fixed << std::setprecision(1)
              << 100.0 * d.GoodOrBetterShare() << std::defaultfloat
              << "% win-win or good of " << d.total << " cases\n";
  }
  return failed == static_cast<int>(result.records.size()) ? kExitError : 0;
}

int ReportCommand(const std::vector<fs::path>& inputs, const fs::path& out,
                  const std::string& reference, double alpha) {
  std::vector<fairhome::RunRecord> records;
  std::vector<fairhome::RepetitionBaseline> baselines;
  for (const auto& dir : inputs) {
    auto r = fairhome::ReadMetricsCsv(dir / "metrics.csv");
    records.insert(records.end(), r.begin(), r.end());
    if (fs::exists(dir / "baselines.csv")) {
      auto b = fairhome::ReadBaselinesCsv(dir / "baselines.csv");
      baselines.insert(baselines.end(), b.begin(), b.end());
    }
  }
  const auto cases = fairhome::ClassifyTradeoffs(records, baselines);
  const auto wtl = fairhome::ComputeWinTieLoss(records, reference, alpha);
  fairhome::EmitReport(records, baselines, cases, wtl, out);
  std::cout << "wrote report for " << records.size() << " records to "
            << out.string() << "\n";
  return 0;
}

int MetricsCommand(const fs::path& predictions,
                   const std::vector<std::string>& protected_names,
                   const std::optional<fs::path>& out) {
  const auto data = ReadPredictions(predictions, protected_names);
  const auto report = fairhome::Evaluate(data);
  for (const auto& line : report.excluded_subgroups) {
    std::cerr << "excluded: " << line << "\n";
  }
  std::ofstream file;
  if (out) {
    file.open(*out, std::ios::binary);
    if (!file)
      throw Error(ErrorCode::kIo, "cannot write '" + out->string() + "'");
  }
  std::ostream& sink = out ? static_cast<std::ostream&>(file) : std::cout;
  sink << "metric,value\n";
  for (const auto& [name, value] : fairhome::ToRecord(report)) {
    sink << name << ","
         << (std::isnan(value) ? "nan" : fairhome::FormatNumber(value)) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Intersectional fairness by higher-order mutation ensembles"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run an experiment matrix");
  fs::path config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> reps;
  std::optional<fs::path> run_out;
  bool deep_layout = false;
  run->add_option("--config", config_path, "Experiment config (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_option("--seed", seed, "Base seed (overrides the config)");
  run->add_option("--reps", reps, "Repetitions (overrides the config)")
      ->check(CLI::PositiveNumber);
  run->add_option("--out", run_out, "Output directory (overrides the config)");
  run->add_flag("--paper-arch", deep_layout,
                "Use the 64-32-16-8-4 MLP layout instead of the config's");

  auto* report = app.add_subcommand("report", "Rebuild tables from run output");
  std::vector<fs::path> inputs;
  fs::path report_out;
  std::string reference = "fairhome";
  double alpha = 0.05;
  report->add_option("--in", inputs, "Run output directories")
      ->required()
      ->check(CLI::ExistingDirectory);
  report->add_option("--out", report_out, "Output directory")->required();
  report
      ->add_option("--reference", reference,
                   "Method compared in the win/tie/loss table")
      ->capture_default_str();
  report->add_option("--alpha", alpha, "Significance level")
      ->capture_default_str();

  auto* metrics = app.add_subcommand("metrics", "Score a predictions CSV");
  fs::path predictions;
  std::vector<std::string> protected_names;
  std::optional<fs::path> metrics_out;
  metrics
      ->add_option("--predictions", predictions,
                   "CSV with y_true, y_pred and protected attribute columns")
      ->required()
      ->check(CLI::ExistingFile);
  metrics
      ->add_option("--protected", protected_names,
                   "Protected columns (default: all but y_true, y_pred)")
      ->delimiter(',');
  metrics->add_option("--out", metrics_out, "Output CSV (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  }

  try {
    if (*run) return RunCommand(config_path, seed, reps, run_out, deep_layout);
    if (*report) return ReportCommand(inputs, report_out, reference, alpha);
    if (*metrics)
      return MetricsCommand(predictions, protected_names, metrics_out);
  } catch (const Error& e) {
    std::cerr << "fairhome: " << e.what() << "\n";
    return e.code() == ErrorCode::kUsage ? kExitUsage : kExitError;
  } catch (const std::exception& e) {
    std::cerr << "fairhome: " << e.what() << "\n";
    return kExitError;
  }
  return kExitUsage;
}
