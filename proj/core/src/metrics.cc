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

#include "fairhome/metrics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "fairhome/error.h"

namespace fairhome {
namespace {

struct Counts {
  double rows = 0;
  double predicted_positive = 0;
  double positive = 0;
  double true_positive = 0;
  double negative = 0;
  double false_positive = 0;

  void Add(int y_true, int y_pred) {
    rows += 1;
    predicted_positive += y_pred;
    if (y_true == 1) {
      positive += 1;
      true_positive += y_pred;
    } else {
      negative += 1;
      false_positive += y_pred;
    }
  }
  double FavorableRate() const { return predicted_positive / rows; }
  double Tpr() const { return true_positive / positive; }
  double Fpr() const { return false_positive / negative; }
};

std::map<SubgroupKey, Counts> CountBySubgroup(const LabeledPredictions& data) {
  data.Validate();
  std::map<SubgroupKey, Counts> counts;
  for (std::size_t i = 0; i < data.size(); ++i) {
    counts[data.subgroup_of[i]].Add(data.y_true[i], data.y_pred[i]);
  }
  return counts;
}

Counts CountAll(const LabeledPredictions& data) {
  Counts all;
  for (std::size_t i = 0; i < data.size(); ++i) {
    all.Add(data.y_true[i], data.y_pred[i]);
  }
  return all;
}

struct Spread {
  double min = std::numeric_limits<double>::infinity();
  double max = -std::numeric_limits<double>::infinity();
  int count = 0;

  void Add(double v) {
    min = std::min(min, v);
    max = std::max(max, v);
    ++count;
  }
  double Range() const { return max - min; }
};

std::string JoinLines(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& line : lines) {
    out += "\n  ";
    out += line;
  }
  return out;
}

[[noreturn]] void ThrowUndefined(const std::string& what,
                                 const LabeledPredictions& data) {
  const auto excluded = ExcludedSubgroups(data);
  throw Error(
      ErrorCode::kMetricUndefined,
      what + (excluded.empty() ? "" : "; excluded:" + JoinLines(excluded)));
}

}  // namespace

void LabeledPredictions::Validate() const {
  const std::size_t n = y_true.size();
  if (y_pred.size() != n || subgroup_of.size() != n) {
    throw Error(ErrorCode::kShape, "prediction arrays differ in length");
  }
  for (const auto& [name, groups] : single_group_of) {
    if (groups.size() != n) {
      throw Error(ErrorCode::kShape,
                  "group column '" + name + "' differs in length");
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if ((y_true[i] != 0 && y_true[i] != 1) ||
        (y_pred[i] != 0 && y_pred[i] != 1)) {
      throw Error(ErrorCode::kShape, "labels must be 0 or 1");
    }
  }
}

LabeledPredictions MakeLabeledPredictions(const Dataset& test,
                                          std::vector<int> y_pred) {
  const Schema& schema = test.schema();
  LabeledPredictions data;
  data.y_true = test.labels();
  data.y_pred = std::move(y_pred);
  data.subgroup_of.reserve(test.size());
  for (const std::string& name : schema.protected_attributes()) {
    data.single_group_of.emplace_back(name, std::vector<std::string>());
    data.single_group_of.back().second.reserve(test.size());
  }
  for (const Instance& row : test.rows()) {
    SubgroupKey key;
    for (std::size_t p = 0; p < schema.num_protected(); ++p) {
      const std::string& value = row.values[schema.protected_indices()[p]];
      key.assignment.emplace_back(schema.protected_attributes()[p], value);
      data.single_group_of[p].second.push_back(value);
    }
    data.subgroup_of.push_back(std::move(key));
  }
  data.Validate();
  return data;
}

LabeledPredictions WithPredictions(const LabeledPredictions& base,
                                   std::vector<int> y_pred) {
  LabeledPredictions data = base;
  data.y_pred = std::move(y_pred);
  data.Validate();
  return data;
}

std::vector<std::string> ExcludedSubgroups(const LabeledPredictions& data) {
  std::vector<std::string> excluded;
  for (const auto& [key, counts] : CountBySubgroup(data)) {
    if (counts.positive == 0) {
      excluded.push_back(key.ToString() + ": no positive-label rows (TPR)");
    }
    if (counts.negative == 0) {
      excluded.push_back(key.ToString() + ": no negative-label rows (FPR)");
    }
  }
  return excluded;
}

WorstCaseFairness ComputeWorstCase(const LabeledPredictions& data) {
  Spread rate;
  Spread tpr;
  Spread odds;
  for (const auto& [key, counts] : CountBySubgroup(data)) {
    rate.Add(counts.FavorableRate());
    if (counts.positive > 0) tpr.Add(counts.Tpr());
    if (counts.positive > 0 && counts.negative > 0) {
      odds.Add(counts.Fpr() + counts.Tpr());
    }
  }
  if (rate.count < 2 || tpr.count < 2 || odds.count < 2) {
    ThrowUndefined("worst-case metrics need two eligible subgroups (found " +
                       std::to_string(rate.count) + " for SPD, " +
                       std::to_string(odds.count) + " for AOD, " +
                       std::to_string(tpr.count) + " for EOD)",
                   data);
  }
  return {rate.Range(), 0.5 * odds.Range(), tpr.Range()};
}

AverageCaseFairness ComputeAverageCase(const LabeledPredictions& data) {
  const auto by_subgroup = CountBySubgroup(data);
  const Counts all = CountAll(data);
  double spd_sum = 0.0;
  double eod_sum = 0.0;
  double aod_sum = 0.0;
  int spd_n = 0;
  int eod_n = 0;
  int aod_n = 0;
  for (const auto& [key, counts] : by_subgroup) {
    spd_sum += std::fabs(counts.FavorableRate() - all.FavorableRate());
    ++spd_n;
    if (counts.positive > 0) {
      eod_sum += std::fabs(counts.Tpr() - all.Tpr());
      ++eod_n;
    }
    if (counts.positive > 0 && counts.negative > 0) {
      aod_sum += 0.5 * (std::fabs(counts.Fpr() - all.Fpr()) +
                        std::fabs(counts.Tpr() - all.Tpr()));
      ++aod_n;
    }
  }
  if (spd_n == 0 || eod_n == 0 || aod_n == 0) {
    ThrowUndefined("average-case metrics need an eligible subgroup", data);
  }
  return {spd_sum / spd_n, aod_sum / aod_n, eod_sum / eod_n};
}

GroupFairness ComputeGroupFairness(const LabeledPredictions& data,
                                   const std::string& attribute) {
  data.Validate();
  const auto it =
      std::find_if(data.single_group_of.begin(), data.single_group_of.end(),
                   [&](const auto& entry) { return entry.first == attribute; });
  if (it == data.single_group_of.end()) {
    throw Error(ErrorCode::kUsage,
                "'" + attribute + "' is not a protected attribute");
  }
  std::map<std::string, Counts> groups;
  for (std::size_t i = 0; i < data.size(); ++i) {
    groups[it->second[i]].Add(data.y_true[i], data.y_pred[i]);
  }
  Spread rate;
  Spread tpr;
  Spread fpr;
  Spread both_tpr;
  Spread both_fpr;
  for (const auto& [value, counts] : groups) {
    rate.Add(counts.FavorableRate());
    if (counts.positive > 0) tpr.Add(counts.Tpr());
    if (counts.negative > 0) fpr.Add(counts.Fpr());
    if (counts.positive > 0 && counts.negative > 0) {
      both_tpr.Add(counts.Tpr());
      both_fpr.Add(counts.Fpr());
    }
  }
  if (rate.count < 2 || tpr.count < 2 || both_tpr.count < 2) {
    throw Error(ErrorCode::kMetricUndefined, "group metrics for '" + attribute +
                                                 "' need two eligible groups");
  }
  return {rate.Range(), 0.5 * (both_fpr.Range() + both_tpr.Range()),
          tpr.Range()};
}

PerformanceMetrics ComputePerformance(const LabeledPredictions& data) {
  data.Validate();
  if (data.size() == 0) {
    throw Error(ErrorCode::kMetricUndefined,
                "performance metrics of an empty test set");
  }
  double tp = 0, tn = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const int y = data.y_true[i];
    const int p = data.y_pred[i];
    if (y == 1 && p == 1) tp += 1;
    if (y == 0 && p == 0) tn += 1;
    if (y == 0 && p == 1) fp += 1;
    if (y == 1 && p == 0) fn += 1;
  }
  auto ratio = [](double num, double den) { return den > 0 ? num / den : 0.0; };
  auto f1 = [](double p, double r) {
    return p + r > 0 ? 2 * p * r / (p + r) : 0.0;
  };
  const double precision1 = ratio(tp, tp + fp);
  const double recall1 = ratio(tp, tp + fn);
  const double precision0 = ratio(tn, tn + fn);
  const double recall0 = ratio(tn, tn + fp);

  PerformanceMetrics metrics;
  metrics.accuracy = (tp + tn) / static_cast<double>(data.size());
  metrics.macro_precision = 0.5 * (precision1 + precision0);
  metrics.macro_recall = 0.5 * (recall1 + recall0);
  metrics.macro_f1 = 0.5 * (f1(precision1, recall1) + f1(precision0, recall0));
  const double denominator = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
  metrics.mcc =
      denominator > 0 ? (tp * tn - fp * fn) / std::sqrt(denominator) : 0.0;
  return metrics;
}

MetricReport Evaluate(const LabeledPredictions& data) {
  MetricReport report;
  report.worst_case = ComputeWorstCase(data);
  report.average_case = ComputeAverageCase(data);
  report.performance = ComputePerformance(data);
  for (const auto& [name, values] : data.single_group_of) {
    GroupFairness group;
    try {
      group = ComputeGroupFairness(data, name);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kMetricUndefined) throw;
      const double nan = std::numeric_limits<double>::quiet_NaN();
      group = {nan, nan, nan};
    }
    report.per_attribute.emplace_back(name, group);
  }
  report.excluded_subgroups = ExcludedSubgroups(data);
  return report;
}

bool IsFairnessMetric(std::string_view name) {
  return std::find(kFairnessMetrics.begin(), kFairnessMetrics.end(), name) !=
         kFairnessMetrics.end();
}

bool IsPerformanceMetric(std::string_view name) {
  return std::find(kPerformanceMetrics.begin(), kPerformanceMetrics.end(),
                   name) != kPerformanceMetrics.end();
}

double MetricValue(const MetricReport& report, std::string_view name) {
  if (name == "wc_spd") return report.worst_case.spd;
  if (name == "wc_aod") return report.worst_case.aod;
  if (name == "wc_eod") return report.worst_case.eod;
  if (name == "ac_spd") return report.average_case.spd;
  if (name == "ac_aod") return report.average_case.aod;
  if (name == "ac_eod") return report.average_case.eod;
  if (name == "accuracy") return report.performance.accuracy;
  if (name == "macro_precision") return report.performance.macro_precision;
  if (name == "macro_recall") return report.performance.macro_recall;
  if (name == "macro_f1") return report.performance.macro_f1;
  if (name == "mcc") return report.performance.mcc;
  if (name.size() > 5 && name[3] == '[' && name.back() == ']') {
    const std::string_view metric = name.substr(0, 3);
    const std::string_view attribute = name.substr(4, name.size() - 5);
    for (const auto& [attr, group] : report.per_attribute) {
      if (attr != attribute) continue;
      if (metric == "spd") return group.spd;
      if (metric == "aod") return group.aod;
      if (metric == "eod") return group.eod;
    }
  }
  throw Error(ErrorCode::kUsage, "unknown metric '" + std::string(name) + "'");
}

std::vector<std::pair<std::string, double>> ToRecord(
    const MetricReport& report) {
  std::vector<std::pair<std::string, double>> record;
  for (auto name : kFairnessMetrics) {
    record.emplace_back(std::string(name), MetricValue(report, name));
  }
  for (auto name : kPerformanceMetrics) {
    record.emplace_back(std::string(name), MetricValue(report, name));
  }
  for (const auto& [attribute, group] : report.per_attribute) {
    record.emplace_back("spd[" + attribute + "]", group.spd);
    record.emplace_back("aod[" + attribute + "]", group.aod);
    record.emplace_back("eod[" + attribute + "]", group.eod);
  }
  return record;
}

}  // namespace fairhome
