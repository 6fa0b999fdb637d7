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

#ifndef FAIRHOME_FAIREA_H_
#define FAIRHOME_FAIREA_H_

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "fairhome/metrics.h"

namespace fairhome {

struct TradeoffPoint {
  std::string fairness_metric;
  std::string performance_metric;
  double fairness = 0.0;     // lower is fairer
  double performance = 0.0;  // higher is better
};

struct TradeoffBaseline {
  std::vector<double> degrees;
  std::vector<TradeoffPoint> points;  // one per degree
  int reps_per_degree = 0;
};

enum class TradeoffRegion { kWinWin, kGood, kPoor, kLoseLose, kInverted };

std::string_view TradeoffRegionName(TradeoffRegion region);

// 0.0, 0.1, ..., 1.0
std::vector<double> DefaultDegrees();

// Metric values averaged over repetitions, for every named metric, at each
// degree. Shared by all (fairness, performance) pairs of one test set.
struct BaselineGrid {
  std::vector<double> degrees;
  int reps_per_degree = 0;
  // rows[k] holds kFairnessMetrics followed by kPerformanceMetrics.
  std::vector<std::vector<double>> rows;

  TradeoffBaseline Select(std::string_view fairness_metric,
                          std::string_view performance_metric) const;
};

// For each degree t, replaces a uniformly random floor(t * n)-subset of the
// predictions with the majority true label of the test set (ties go to the
// favorable class), recomputes the metrics and averages them over `reps`
// draws. Degrees whose subset is empty or the whole set are evaluated once,
// exactly. Throws Error(kUsage) unless degrees are ascending, start at 0.0
// and end at 1.0, and reps >= 1.
BaselineGrid BuildBaselineGrid(const LabeledPredictions& original,
                               const std::vector<double>& degrees, int reps,
                               std::uint64_t seed);

// Throws Error(kUsage) for unknown metric names.
TradeoffBaseline BuildBaseline(const LabeledPredictions& original,
                               std::string_view fairness_metric,
                               std::string_view performance_metric,
                               const std::vector<double>& degrees, int reps,
                               std::uint64_t seed);

struct CaseClassification {
  TradeoffRegion region = TradeoffRegion::kGood;
  // The method's performance fell below every baseline point and was
  // compared against the last one.
  bool clamped = false;
};

// Places a mitigation result relative to the original model and the
// baseline curve (linear between sampled degrees):
//   perf >= orig, fair <  orig                  -> WinWin
//   perf >  orig, fair == orig                  -> WinWin
//   perf == orig, fair == orig                  -> Good
//   perf >= orig, fair >  orig                  -> Inverted
//   perf <  orig, fair >= orig                  -> LoseLose
//   perf <  orig, fair <  orig, below the curve -> Good, otherwise Poor
// Throws Error(kUsage) if the points do not share metric names.
CaseClassification ClassifyCase(const TradeoffPoint& method,
                                const TradeoffPoint& original,
                                const TradeoffBaseline& baseline);

// Baseline fairness at the given performance. Sets *clamped when the
// performance lies outside the curve's range.
double InterpolateFairness(const TradeoffBaseline& baseline, double performance,
                           bool* clamped = nullptr);

// degree,fairness,performance
void WriteBaselineCsv(std::ostream& out, const TradeoffBaseline& baseline);

}  // namespace fairhome

#endif  // FAIRHOME_FAIREA_H_
