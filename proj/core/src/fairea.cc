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

#include "fairhome/fairea.h"

#include <algorithm>
#include <cmath>

#include "fairhome/csv.h"
#include "fairhome/error.h"
#include "random.h"

namespace fairhome {
namespace {

std::vector<double> NamedValues(const MetricReport& report) {
  std::vector<double> values;
  values.reserve(kFairnessMetrics.size() + kPerformanceMetrics.size());
  for (auto name : kFairnessMetrics)
    values.push_back(MetricValue(report, name));
  for (auto name : kPerformanceMetrics) {
    values.push_back(MetricValue(report, name));
  }
  return values;
}

std::size_t NamedIndex(std::string_view name) {
  for (std::size_t i = 0; i < kFairnessMetrics.size(); ++i) {
    if (kFairnessMetrics[i] == name) return i;
  }
  for (std::size_t i = 0; i < kPerformanceMetrics.size(); ++i) {
    if (kPerformanceMetrics[i] == name) return kFairnessMetrics.size() + i;
  }
  throw Error(ErrorCode::kUsage, "unknown metric '" + std::string(name) + "'");
}

}  // namespace

std::string_view TradeoffRegionName(TradeoffRegion region) {
  switch (region) {
    case TradeoffRegion::kWinWin:
      return "win_win";
    case TradeoffRegion::kGood:
      return "good";
    case TradeoffRegion::kPoor:
      return "poor";
    case TradeoffRegion::kLoseLose:
      return "lose_lose";
    case TradeoffRegion::kInverted:
      return "inverted";
  }
  return "unknown";
}

std::vector<double> DefaultDegrees() {
  std::vector<double> degrees;
  for (int i = 0; i <= 10; ++i) degrees.push_back(i / 10.0);
  return degrees;
}

TradeoffBaseline BaselineGrid::Select(
    std::string_view fairness_metric,
    std::string_view performance_metric) const {
  if (!IsFairnessMetric(fairness_metric)) {
    throw Error(ErrorCode::kUsage, "unknown fairness metric '" +
                                       std::string(fairness_metric) + "'");
  }
  if (!IsPerformanceMetric(performance_metric)) {
    throw Error(ErrorCode::kUsage, "unknown performance metric '" +
                                       std::string(performance_metric) + "'");
  }
  const std::size_t f = NamedIndex(fairness_metric);
  const std::size_t p = NamedIndex(performance_metric);
  TradeoffBaseline baseline;
  baseline.degrees = degrees;
  baseline.reps_per_degree = reps_per_degree;
  for (const auto& row : rows) {
    baseline.points.push_back({std::string(fairness_metric),
                               std::string(performance_metric), row.at(f),
                               row.at(p)});
  }
  return baseline;
}

BaselineGrid BuildBaselineGrid(const LabeledPredictions& original,
                               const std::vector<double>& degrees, int reps,
                               std::uint64_t seed) {
  if (reps < 1) throw Error(ErrorCode::kUsage, "reps must be at least 1");
  if (degrees.size() < 2 || degrees.front() != 0.0 || degrees.back() != 1.0 ||
      !std::is_sorted(degrees.begin(), degrees.end())) {
    throw Error(ErrorCode::kUsage, "degrees must be ascending from 0.0 to 1.0");
  }
  original.Validate();
  const std::size_t n = original.size();
  const auto positives =
      std::count(original.y_true.begin(), original.y_true.end(), 1);
  const int majority = 2 * static_cast<std::size_t>(positives) >= n ? 1 : 0;

  BaselineGrid grid;
  grid.degrees = degrees;
  grid.reps_per_degree = reps;
  internal::Rng rng(seed);
  std::vector<std::size_t> order(n);
  for (double degree : degrees) {
    const auto replaced = static_cast<std::size_t>(
        std::floor(degree * static_cast<double>(n) + 1e-9));
    if (replaced == 0) {
      grid.rows.push_back(NamedValues(Evaluate(original)));
      continue;
    }
    if (replaced >= n) {
      grid.rows.push_back(NamedValues(
          Evaluate(WithPredictions(original, std::vector<int>(n, majority)))));
      continue;
    }
    std::vector<double> sum;
    for (int rep = 0; rep < reps; ++rep) {
      for (std::size_t i = 0; i < n; ++i) order[i] = i;
      // Partial Fisher-Yates: the first `replaced` slots are the subset.
      for (std::size_t i = 0; i < replaced; ++i) {
        std::swap(order[i], order[i + rng.Below(n - i)]);
      }
      std::vector<int> mutated = original.y_pred;
      for (std::size_t i = 0; i < replaced; ++i) mutated[order[i]] = majority;
      const auto values =
          NamedValues(Evaluate(WithPredictions(original, std::move(mutated))));
      if (sum.empty()) sum.assign(values.size(), 0.0);
      for (std::size_t k = 0; k < values.size(); ++k) sum[k] += values[k];
    }
    for (double& v : sum) v /= reps;
    grid.rows.push_back(std::move(sum));
  }
  return grid;
}

TradeoffBaseline BuildBaseline(const LabeledPredictions& original,
                               std::string_view fairness_metric,
                               std::string_view performance_metric,
                               const std::vector<double>& degrees, int reps,
                               std::uint64_t seed) {
  // Validate names before doing any work.
  BaselineGrid{}.Select(fairness_metric, performance_metric);
  return BuildBaselineGrid(original, degrees, reps, seed)
      .Select(fairness_metric, performance_metric);
}

double InterpolateFairness(const TradeoffBaseline& baseline, double performance,
                           bool* clamped) {
  const auto& points = baseline.points;
  if (points.empty()) throw Error(ErrorCode::kUsage, "empty baseline");
  if (clamped != nullptr) *clamped = false;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const double p0 = points[i].performance;
    const double p1 = points[i + 1].performance;
    if (performance < std::min(p0, p1) || performance > std::max(p0, p1)) {
      continue;
    }
    if (p0 == p1) return std::min(points[i].fairness, points[i + 1].fairness);
    const double t = (performance - p0) / (p1 - p0);
    return points[i].fairness +
           t * (points[i + 1].fairness - points[i].fairness);
  }
  if (points.size() == 1 && performance == points[0].performance) {
    return points[0].fairness;
  }
  if (clamped != nullptr) *clamped = true;
  return performance > points.front().performance ? points.front().fairness
                                                  : points.back().fairness;
}

CaseClassification ClassifyCase(const TradeoffPoint& method,
                                const TradeoffPoint& original,
                                const TradeoffBaseline& baseline) {
  auto same_axes = [&](const TradeoffPoint& point) {
    return point.fairness_metric == method.fairness_metric &&
           point.performance_metric == method.performance_metric;
  };
  if (!same_axes(original) ||
      !std::all_of(baseline.points.begin(), baseline.points.end(), same_axes)) {
    throw Error(ErrorCode::kUsage, "trade-off points use different metrics");
  }
  CaseClassification result;
  const bool better_or_equal_performance =
      method.performance >= original.performance;
  if (better_or_equal_performance) {
    if (method.fairness < original.fairness) {
      result.region = TradeoffRegion::kWinWin;
    } else if (method.fairness > original.fairness) {
      result.region = TradeoffRegion::kInverted;
    } else {
      result.region = method.performance > original.performance
                          ? TradeoffRegion::kWinWin
                          : TradeoffRegion::kGood;
    }
    return result;
  }
  if (method.fairness >= original.fairness) {
    result.region = TradeoffRegion::kLoseLose;
    return result;
  }
  const double curve =
      InterpolateFairness(baseline, method.performance, &result.clamped);
  result.region =
      method.fairness < curve ? TradeoffRegion::kGood : TradeoffRegion::kPoor;
  return result;
}

void WriteBaselineCsv(std::ostream& out, const TradeoffBaseline& baseline) {
  std::string fairness = "fairness";
  std::string performance = "performance";
  if (!baseline.points.empty()) {
    fairness = baseline.points.front().fairness_metric;
    performance = baseline.points.front().performance_metric;
  }
  csv::WriteRow(out, {"degree", fairness, performance});
  for (std::size_t i = 0; i < baseline.points.size(); ++i) {
    csv::WriteRow(out, {FormatNumber(baseline.degrees.at(i)),
                        FormatNumber(baseline.points[i].fairness),
                        FormatNumber(baseline.points[i].performance)});
  }
}

}  // namespace fairhome
