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

#ifndef FAIRHOME_METRICS_H_
#define FAIRHOME_METRICS_H_

#include <array>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fairhome/data.h"

namespace fairhome {

// Parallel per-row arrays describing one evaluated test set.
struct LabeledPredictions {
  std::vector<int> y_true;
  std::vector<int> y_pred;
  std::vector<SubgroupKey> subgroup_of;
  // Protected attribute name with the per-row value of that attribute.
  std::vector<std::pair<std::string, std::vector<std::string>>> single_group_of;

  std::size_t size() const { return y_true.size(); }
  // Throws Error(kShape) on length mismatches or labels outside {0, 1}.
  void Validate() const;
};

LabeledPredictions MakeLabeledPredictions(const Dataset& test,
                                          std::vector<int> y_pred);

// Same subgroups and labels, different predictions.
LabeledPredictions WithPredictions(const LabeledPredictions& base,
                                   std::vector<int> y_pred);

struct WorstCaseFairness {
  double spd = 0.0;
  double aod = 0.0;
  double eod = 0.0;
};

struct AverageCaseFairness {
  double spd = 0.0;
  double aod = 0.0;
  double eod = 0.0;
};

struct GroupFairness {
  double spd = 0.0;
  double aod = 0.0;
  double eod = 0.0;
};

struct PerformanceMetrics {
  double accuracy = 0.0;
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
  double mcc = 0.0;
};

// A subgroup takes part in a rate only when the rate's denominator is
// non-zero: favorable rate needs a row, TPR a positive-label row, FPR a
// negative-label row. Returns one line per (subgroup, missing rate), e.g.
// "sex=female|age=young: no negative-label rows (FPR)".
std::vector<std::string> ExcludedSubgroups(const LabeledPredictions& data);

// Max-minus-min over eligible subgroups:
//   spd = max P[Y^=1|s] - min P[Y^=1|s]
//   aod = 1/2 [max (FPR_s + TPR_s) - min (FPR_s + TPR_s)]
//   eod = max TPR_s - min TPR_s
// Throws Error(kMetricUndefined), listing the exclusions, when fewer than two
// subgroups are eligible for any of the three.
WorstCaseFairness ComputeWorstCase(const LabeledPredictions& data);

// Mean absolute deviation of each eligible subgroup from the whole
// population:
//   spd = mean |P[Y^=1|s] - P[Y^=1]|
//   eod = mean |TPR_s - TPR|
//   aod = mean 1/2 (|FPR_s - FPR| + |TPR_s - TPR|)
// Throws Error(kMetricUndefined) when no subgroup is eligible.
AverageCaseFairness ComputeAverageCase(const LabeledPredictions& data);

// Single-attribute SPD/AOD/EOD as absolute differences between the groups of
// `attribute` (max-minus-min when it has more than two groups). Throws
// Error(kUsage) for a non-protected attribute and Error(kMetricUndefined)
// with fewer than two eligible groups.
GroupFairness ComputeGroupFairness(const LabeledPredictions& data,
                                   const std::string& attribute);

// Precision, recall and F1 are averaged over both classes. A class that is
// never predicted has precision 0; MCC is 0 when its denominator is 0.
PerformanceMetrics ComputePerformance(const LabeledPredictions& data);

struct MetricReport {
  WorstCaseFairness worst_case;
  AverageCaseFairness average_case;
  PerformanceMetrics performance;
  // NaN entries mark attributes whose group metrics are undefined.
  std::vector<std::pair<std::string, GroupFairness>> per_attribute;
  std::vector<std::string> excluded_subgroups;
};

// All metrics for one test set. Throws like ComputeWorstCase.
MetricReport Evaluate(const LabeledPredictions& data);

inline constexpr std::array<std::string_view, 6> kFairnessMetrics = {
    "wc_spd", "wc_aod", "wc_eod", "ac_spd", "ac_aod", "ac_eod"};
inline constexpr std::array<std::string_view, 5> kPerformanceMetrics = {
    "accuracy", "macro_precision", "macro_recall", "macro_f1", "mcc"};

bool IsFairnessMetric(std::string_view name);
bool IsPerformanceMetric(std::string_view name);

// Looks a metric up by name: the eleven above, or "spd[attr]", "aod[attr]",
// "eod[attr]". Throws Error(kUsage) for unknown names.
double MetricValue(const MetricReport& report, std::string_view name);

// Flat (name, value) record in a fixed column order: the eleven named
// metrics, then spd/aod/eod per protected attribute.
std::vector<std::pair<std::string, double>> ToRecord(
    const MetricReport& report);

}  // namespace fairhome

#endif  // FAIRHOME_METRICS_H_
