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

#ifndef FAIRHOME_RUNNER_H_
#define FAIRHOME_RUNNER_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "fairhome/data.h"
#include "fairhome/ensemble.h"
#include "fairhome/fairea.h"
#include "fairhome/metrics.h"
#include "fairhome/model.h"
#include "fairhome/stats.h"

namespace fairhome {

enum class ModelKind { kLogistic, kMlp };

std::string_view ModelKindName(ModelKind kind);

enum class Method {
  kOriginal,
  kFairhome,   // protected-only mutants, majority vote
  kFairhome1,  // correlated features, majority vote
  kFairhome2,  // protected-only, averaging
  kFairhome3,  // protected-only, weighted averaging
  kFairhome4,  // single-attribute mutants, majority vote
  kFairhome5,  // multi-attribute mutants, majority vote
  kRew,        // reweighted training
};

std::string_view MethodName(Method method);
// Throws Error(kUsage) for unknown names.
Method ParseMethod(std::string_view name);

struct ExperimentConfig {
  std::string task;
  std::filesystem::path dataset_path;
  std::filesystem::path schema_path;
  ModelKind model = ModelKind::kLogistic;
  std::vector<Method> methods = {Method::kOriginal, Method::kFairhome};
  int repetitions = 5;
  double test_fraction = 0.3;
  std::uint64_t base_seed = 0;
  std::vector<double> fairea_degrees = DefaultDegrees();
  int fairea_reps = 10;
  double alpha = 0.05;
  std::filesystem::path output_dir = "out";
  // seed and instance_weights are set per repetition.
  TrainConfig train;
  std::vector<std::size_t> mlp_layout = {16, 8};

  // Throws Error(kUsage).
  void Validate() const;
};

// JSON keys: task, dataset, schema, model ("logistic" | "mlp"), methods,
// repetitions, test_fraction, base_seed, fairea {degrees, reps}, alpha,
// output_dir, train {learning_rate, epochs, batch_size, l2_penalty},
// mlp_layout. Relative paths resolve against `base_dir`. Missing keys keep
// their defaults; unknown keys are rejected.
ExperimentConfig ParseExperimentConfig(std::istream& in,
                                       const std::filesystem::path& base_dir);
ExperimentConfig LoadExperimentConfig(const std::filesystem::path& path);

// Stable JSON form (sorted keys) used for the manifest and its hash.
std::string CanonicalConfigJson(const ExperimentConfig& config);
std::uint64_t ConfigHash(const ExperimentConfig& config);

struct RunRecord {
  std::string task;
  std::string method;
  int repetition = 0;
  std::uint64_t seed = 0;
  bool ok = true;
  std::string error;
  MetricReport report;
  std::uint64_t model_fingerprint = 0;
  double duration_seconds = 0.0;
  std::vector<std::string> warnings;
};

// Fairea grid of one repetition, built from the original model's test
// predictions.
struct RepetitionBaseline {
  std::string task;
  int repetition = 0;
  BaselineGrid grid;
};

struct ExperimentResult {
  std::vector<RunRecord> records;
  std::vector<RepetitionBaseline> baselines;
  std::vector<std::string> warnings;
  std::vector<std::uint64_t> seeds;
};

// Everything a method needs to turn one test set into decisions.
struct MethodContext {
  const Dataset* train = nullptr;
  const Dataset* test = nullptr;
  const Classifier* classifier = nullptr;
  const ProtectedDomains* domains = nullptr;
  const CorrelationModel* correlation = nullptr;
};

// Mutation/ensemble settings of a FairHOME variant. For kFairhome5 with two
// protected attributes the vote falls back to averaging and `warning` is
// set. Throws Error(kUsage) for kOriginal and kRew.
FairhomeOptions FairhomeOptionsFor(Method method, std::size_t num_protected,
                                   std::string* warning = nullptr);

// Test-set decisions of an inference-time method (everything but kRew).
std::vector<int> PredictWithMethod(Method method, const MethodContext& context,
                                   std::string* warning = nullptr);

// For each repetition r: split with seed base_seed + r, train the configured
// model once, evaluate every method on the same split (kRew retrains with
// reweighting) and build the Fairea grid from the original predictions. A
// failing (method, repetition) cell yields a record with ok = false.
ExperimentResult RunExperiment(const ExperimentConfig& config);

// One classified (fairness metric, performance metric) pair.
struct TradeoffCase {
  std::string task;
  std::string method;
  int repetition = 0;
  std::string fairness_metric;
  std::string performance_metric;
  TradeoffRegion region = TradeoffRegion::kGood;
  bool clamped = false;
};

// Every successful non-original record against its repetition's baseline,
// over all 6 x 5 metric pairs.
std::vector<TradeoffCase> ClassifyTradeoffs(
    const std::vector<RunRecord>& records,
    const std::vector<RepetitionBaseline>& baselines);

struct RegionDistribution {
  std::string method;
  std::array<int, 5> counts{};  // indexed by TradeoffRegion
  int total = 0;

  // Share of WinWin + Good cases, in [0, 1]; 0 for an empty method.
  double GoodOrBetterShare() const;
};

std::vector<RegionDistribution> SummarizeRegions(
    const std::vector<TradeoffCase>& cases);

struct ImprovementRow {
  std::string method;
  std::string metric;
  double original_mean = 0.0;
  double method_mean = 0.0;
  double absolute_change = 0.0;
  // Percent; NaN when the original mean is 0.
  double relative_change = 0.0;
};

ImprovementRow Improvement(std::string method, std::string metric,
                           double original_mean, double method_mean);

// Mean of every named metric per method vs. the original method, per task,
// then averaged across tasks.
std::vector<ImprovementRow> ComputeImprovements(
    const std::vector<RunRecord>& records);

// metric -> compared method -> counts. `reference` is compared against every
// other method on the per-repetition values of each fairness metric, one
// comparison per task.
using WtlMatrix = std::map<std::string, std::map<std::string, WtlCounts>>;

WtlMatrix ComputeWinTieLoss(const std::vector<RunRecord>& records,
                            std::string_view reference = "fairhome",
                            double alpha = 0.05);

// Writes into `output_dir` (created if needed):
//   metrics.csv       one row per record
//   baselines.csv     Fairea grids
//   improvement.csv   mean absolute/relative change vs. original
//   wtl.csv           win/tie/loss matrix
//   regions.csv       trade-off region distribution per method
//   tradeoffs.csv     every classified case
// Throws Error(kIo) when a file cannot be written.
void EmitReport(const std::vector<RunRecord>& records,
                const std::vector<RepetitionBaseline>& baselines,
                const std::vector<TradeoffCase>& cases, const WtlMatrix& wtl,
                const std::filesystem::path& output_dir);

// manifest.json: config, its hash, seeds, warnings. timings.csv: wall-clock
// time per record (kept apart so the metric tables stay reproducible).
void WriteRunManifest(const ExperimentConfig& config,
                      const ExperimentResult& result,
                      const std::filesystem::path& output_dir);

std::vector<RunRecord> ReadMetricsCsv(const std::filesystem::path& path);
std::vector<RepetitionBaseline> ReadBaselinesCsv(
    const std::filesystem::path& path);

}  // namespace fairhome

#endif  // FAIRHOME_RUNNER_H_
