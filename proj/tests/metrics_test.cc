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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fairhome/error.h"
#include "oracle/oracle.h"
#include "test_util.h"

namespace fairhome {
namespace {

using testing::CodeOf;

// One protected attribute "g"; the subgroup is the group.
LabeledPredictions OneAttribute(const std::vector<int>& y_true,
                                const std::vector<int>& y_pred,
                                const std::vector<std::string>& group) {
  LabeledPredictions data;
  data.y_true = y_true;
  data.y_pred = y_pred;
  data.single_group_of.emplace_back("g", group);
  for (const auto& g : group) data.subgroup_of.push_back({{{"g", g}}});
  return data;
}

// Appends `count` rows of (y_true, y_pred) in group g.
void Add(std::vector<int>& t, std::vector<int>& p, std::vector<std::string>& g,
         const std::string& group, int y_true, int y_pred, int count) {
  for (int i = 0; i < count; ++i) {
    t.push_back(y_true);
    p.push_back(y_pred);
    g.push_back(group);
  }
}

void ExpectMatchesOracle(const LabeledPredictions& data,
                         const std::vector<std::string>& group) {
  const auto expected = oracle::CountMetrics(data.y_true, data.y_pred, group);
  const MetricReport r = Evaluate(data);
  EXPECT_NEAR(r.worst_case.spd, expected.wc_spd, 1e-12);
  EXPECT_NEAR(r.worst_case.aod, expected.wc_aod, 1e-12);
  EXPECT_NEAR(r.worst_case.eod, expected.wc_eod, 1e-12);
  EXPECT_NEAR(r.average_case.spd, expected.ac_spd, 1e-12);
  EXPECT_NEAR(r.average_case.aod, expected.ac_aod, 1e-12);
  EXPECT_NEAR(r.average_case.eod, expected.ac_eod, 1e-12);
  EXPECT_NEAR(r.performance.accuracy, expected.accuracy, 1e-12);
  EXPECT_NEAR(r.performance.macro_precision, expected.macro_precision, 1e-12);
  EXPECT_NEAR(r.performance.macro_recall, expected.macro_recall, 1e-12);
  EXPECT_NEAR(r.performance.macro_f1, expected.macro_f1, 1e-12);
  EXPECT_NEAR(r.performance.mcc, expected.mcc, 1e-12);
}

TEST(WorstCaseTest, FavorableRateSpread) {
  std::vector<int> t, p;
  std::vector<std::string> g;
  const double rates[] = {0.5, 0.2, 0.4, 0.3};
  for (int s = 0; s < 4; ++s) {
    const int favorable = static_cast<int>(rates[s] * 10);
    Add(t, p, g, "s" + std::to_string(s), 1, 1, favorable);
    Add(t, p, g, "s" + std::to_string(s), 0, 0, 10 - favorable);
  }
  EXPECT_NEAR(ComputeWorstCase(OneAttribute(t, p, g)).spd, 0.3, 1e-15);
}

TEST(WorstCaseTest, ConstantPredictionsAreFair) {
  std::vector<int> t, p;
  std::vector<std::string> g;
  Add(t, p, g, "a", 1, 0, 3);
  Add(t, p, g, "a", 0, 0, 2);
  Add(t, p, g, "b", 1, 0, 1);
  Add(t, p, g, "b", 0, 0, 4);
  Add(t, p, g, "c", 0, 0, 1);
  Add(t, p, g, "c", 1, 0, 1);
  for (int constant : {0, 1}) {
    const auto data = OneAttribute(t, std::vector<int>(t.size(), constant), g);
    const auto wc = ComputeWorstCase(data);
    EXPECT_EQ(wc.spd, 0.0);
    EXPECT_EQ(wc.aod, 0.0);
    EXPECT_EQ(wc.eod, 0.0);
  }
}

TEST(WorstCaseTest, OddsFromConfusionCounts) {
  // a: TPR 4/5, FPR 2/5. b: TPR 1/2, FPR 1/10.
  std::vector<int> t, p;
  std::vector<std::string> g;
  Add(t, p, g, "a", 1, 1, 4);
  Add(t, p, g, "a", 1, 0, 1);
  Add(t, p, g, "a", 0, 1, 2);
  Add(t, p, g, "a", 0, 0, 3);
  Add(t, p, g, "b", 1, 1, 1);
  Add(t, p, g, "b", 1, 0, 1);
  Add(t, p, g, "b", 0, 1, 1);
  Add(t, p, g, "b", 0, 0, 9);
  const auto wc = ComputeWorstCase(OneAttribute(t, p, g));
  EXPECT_NEAR(wc.aod, 0.3, 1e-15);
  EXPECT_NEAR(wc.eod, 0.3, 1e-15);
  ExpectMatchesOracle(OneAttribute(t, p, g), g);
}

TEST(WorstCaseTest, IneligibleSubgroupsAreExcludedAndReported) {
  std::vector<int> t, p;
  std::vector<std::string> g;
  Add(t, p, g, "a", 1, 1, 2);
  Add(t, p, g, "a", 0, 0, 2);
  Add(t, p, g, "b", 1, 0, 2);
  Add(t, p, g, "b", 0, 0, 2);
  Add(t, p, g, "c", 0, 1, 3);  // no positive-label rows
  const auto data = OneAttribute(t, p, g);
  const auto wc = ComputeWorstCase(data);
  EXPECT_NEAR(wc.spd, 1.0, 1e-15);  // c predicts favorable for everyone
  EXPECT_NEAR(wc.eod, 1.0, 1e-15);  // a vs b only
  EXPECT_EQ(ExcludedSubgroups(data),
            std::vector<std::string>{"g=c: no positive-label rows (TPR)"});
  EXPECT_EQ(Evaluate(data).excluded_subgroups.size(), 1u);
}

TEST(WorstCaseTest, FewerThanTwoEligibleIsUndefined) {
  std::vector<int> t, p;
  std::vector<std::string> g;
  Add(t, p, g, "a", 1, 1, 2);
  Add(t, p, g, "a", 0, 0, 1);
  Add(t, p, g, "b", 0, 1, 2);
  try {
    ComputeWorstCase(OneAttribute(t, p, g));
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMetricUndefined);
    EXPECT_NE(std::string(e.what()).find("g=b: no positive-label rows"),
              std::string::npos);
  }
  EXPECT_EQ(CodeOf([&] { Evaluate(OneAttribute(t, p, g)); }),
            ErrorCode::kMetricUndefined);
}

TEST(WorstCaseTest, InvariantUnderSubgroupRenaming) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<int> t, p;
    std::vector<std::string> g, renamed;
    for (int i = 0; i < 40; ++i) {
      t.push_back(i % 2);
      p.push_back(static_cast<int>(rng() % 2));
      const int s = static_cast<int>(rng() % 4);
      g.push_back("s" + std::to_string(s));
      renamed.push_back("z" + std::to_string(3 - s));
    }
    EXPECT_EQ(ComputeWorstCase(OneAttribute(t, p, g)).spd,
              ComputeWorstCase(OneAttribute(t, p, renamed)).spd);
  }
}

TEST(AverageCaseTest, SingleSubgroupIsZero) {
  std::vector<int> t, p;
  std::vector<std::string> g;
  Add(t, p, g, "all", 1, 1, 3);
  Add(t, p, g, "all", 1, 0, 2);
  Add(t, p, g, "all", 0, 1, 1);
  Add(t, p, g, "all", 0, 0, 4);
  const auto ac = ComputeAverageCase(OneAttribute(t, p, g));
  EXPECT_EQ(ac.spd, 0.0);
  EXPECT_EQ(ac.aod, 0.0);
  EXPECT_EQ(ac.eod, 0.0);
}

TEST(AverageCaseTest, SymmetricSubgroups) {
  std::vector<int> t, p;
  std::vector<std::string> g;
  Add(t, p, g, "a", 1, 1, 6);
  Add(t, p, g, "a", 0, 0, 4);
  Add(t, p, g, "b", 1, 1, 2);
  Add(t, p, g, "b", 0, 0, 8);
  EXPECT_NEAR(ComputeAverageCase(OneAttribute(t, p, g)).spd, 0.2, 1e-15);
}

TEST(AverageCaseTest, UnequalSubgroupsMatchOracle) {
  std::vector<int> t, p;
  std::vector<std::string> g;
  Add(t, p, g, "a", 1, 1, 3);
  Add(t, p, g, "a", 1, 0, 1);
  Add(t, p, g, "a", 0, 0, 1);
  Add(t, p, g, "b", 1, 1, 2);
  Add(t, p, g, "b", 0, 1, 4);
  Add(t, p, g, "b", 0, 0, 5);
  Add(t, p, g, "b", 1, 0, 3);
  Add(t, p, g, "c", 1, 0, 6);
  Add(t, p, g, "c", 0, 1, 2);
  Add(t, p, g, "c", 0, 0, 3);
  ASSERT_EQ(t.size(), 30u);
  const auto data = OneAttribute(t, p, g);
  ExpectMatchesOracle(data, g);
  // Frozen from the oracle: population favorable rate 11/30.
  const double rate = 11.0 / 30;
  const auto ac = ComputeAverageCase(data);
  EXPECT_NEAR(ac.spd,
              (std::fabs(3.0 / 5 - rate) + std::fabs(6.0 / 14 - rate) +
               std::fabs(2.0 / 11 - rate)) /
                  3,
              1e-15);
}

TEST(GroupFairnessTest, Examples) {
  std::vector<int> t, p;
  std::vector<std::string> g;
  for (const char* group : {"x", "y"}) {
    Add(t, p, g, group, 1, 1, 3);
    Add(t, p, g, group, 1, 0, 1);
    Add(t, p, g, group, 0, 1, 1);
    Add(t, p, g, group, 0, 0, 2);
  }
  const auto same = ComputeGroupFairness(OneAttribute(t, p, g), "g");
  EXPECT_EQ(same.spd, 0.0);
  EXPECT_EQ(same.aod, 0.0);
  EXPECT_EQ(same.eod, 0.0);

  std::vector<int> t2, p2;
  std::vector<std::string> g2;
  Add(t2, p2, g2, "x", 1, 1, 7);
  Add(t2, p2, g2, "x", 0, 0, 3);
  Add(t2, p2, g2, "y", 1, 1, 4);
  Add(t2, p2, g2, "y", 0, 0, 6);
  EXPECT_NEAR(ComputeGroupFairness(OneAttribute(t2, p2, g2), "g").spd, 0.3,
              1e-15);
  EXPECT_EQ(
      CodeOf([&] { ComputeGroupFairness(OneAttribute(t2, p2, g2), "race"); }),
      ErrorCode::kUsage);
}

TEST(GroupFairnessTest, SixteenRowsMatchOracle) {
  std::vector<int> t, p;
  std::vector<std::string> g;
  Add(t, p, g, "m", 1, 1, 3);
  Add(t, p, g, "m", 1, 0, 2);
  Add(t, p, g, "m", 0, 1, 1);
  Add(t, p, g, "m", 0, 0, 2);
  Add(t, p, g, "f", 1, 1, 1);
  Add(t, p, g, "f", 1, 0, 2);
  Add(t, p, g, "f", 0, 1, 2);
  Add(t, p, g, "f", 0, 0, 3);
  ASSERT_EQ(t.size(), 16u);
  const auto expected = oracle::CountGroupMetrics(t, p, g);
  const auto got = ComputeGroupFairness(OneAttribute(t, p, g), "g");
  EXPECT_NEAR(got.spd, expected.spd, 1e-12);
  EXPECT_NEAR(got.aod, expected.aod, 1e-12);
  EXPECT_NEAR(got.eod, expected.eod, 1e-12);
  // Frozen: spd |4/8 - 3/8|, eod |3/5 - 1/3|, aod 1/2 (|1/3 - 2/5| + eod).
  EXPECT_NEAR(got.spd, 0.125, 1e-15);
  EXPECT_NEAR(got.eod, 3.0 / 5 - 1.0 / 3, 1e-15);
  EXPECT_NEAR(got.aod, 0.5 * ((2.0 / 5 - 1.0 / 3) + (3.0 / 5 - 1.0 / 3)),
              1e-15);
}

LabeledPredictions FromConfusion(int tp, int fp, int tn, int fn) {
  std::vector<int> t, p;
  std::vector<std::string> g;
  Add(t, p, g, "a", 1, 1, tp);
  Add(t, p, g, "b", 0, 1, fp);
  Add(t, p, g, "a", 0, 0, tn);
  Add(t, p, g, "b", 1, 0, fn);
  return OneAttribute(t, p, g);
}

TEST(PerformanceTest, Examples) {
  const auto perfect = ComputePerformance(FromConfusion(5, 0, 5, 0));
  EXPECT_EQ(perfect.accuracy, 1.0);
  EXPECT_EQ(perfect.macro_precision, 1.0);
  EXPECT_EQ(perfect.macro_recall, 1.0);
  EXPECT_EQ(perfect.macro_f1, 1.0);
  EXPECT_EQ(perfect.mcc, 1.0);

  const auto noise = ComputePerformance(FromConfusion(5, 5, 5, 5));
  EXPECT_EQ(noise.accuracy, 0.5);
  EXPECT_EQ(noise.mcc, 0.0);

  const auto data = FromConfusion(40, 10, 35, 15);
  const auto m = ComputePerformance(data);
  EXPECT_EQ(m.accuracy, 0.75);
  const auto o = oracle::CountMetrics(data.y_true, data.y_pred,
                                      data.single_group_of[0].second);
  EXPECT_NEAR(m.macro_precision, o.macro_precision, 1e-12);
  EXPECT_NEAR(m.macro_recall, o.macro_recall, 1e-12);
  EXPECT_NEAR(m.macro_f1, o.macro_f1, 1e-12);
  EXPECT_NEAR(m.mcc, o.mcc, 1e-12);
  // Frozen from the oracle: precision (0.8, 0.7), recall (0.7273, 0.7778).
  EXPECT_NEAR(m.macro_precision, 0.75, 1e-12);
  EXPECT_NEAR(m.macro_recall, 0.5 * (40.0 / 55 + 35.0 / 45), 1e-12);
}

TEST(PerformanceTest, NeverPredictedClassHasZeroPrecision) {
  const auto m = ComputePerformance(FromConfusion(6, 4, 0, 0));
  // Class 0 is never predicted: precision 0; class 1 precision 0.6.
  EXPECT_NEAR(m.macro_precision, 0.3, 1e-15);
  EXPECT_EQ(m.mcc, 0.0);
}

TEST(PerformanceTest, SwappingPredictedClassesNegatesMcc) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    const auto data =
        FromConfusion(1 + rng() % 9, rng() % 9, 1 + rng() % 9, rng() % 9);
    std::vector<int> flipped;
    for (int y : data.y_pred) flipped.push_back(1 - y);
    EXPECT_NEAR(ComputePerformance(WithPredictions(data, flipped)).mcc,
                -ComputePerformance(data).mcc, 1e-15);
  }
}

TEST(EvaluateTest, RandomFixturesMatchOracle) {
  std::mt19937_64 rng(1234);
  int checked = 0;
  for (int trial = 0; trial < 300 && checked < 100; ++trial) {
    const std::size_t n = 4 + rng() % 47;
    const std::size_t d = 1 + rng() % 3;
    LabeledPredictions data;
    std::vector<std::string> key_text;
    for (std::size_t k = 0; k < d; ++k) {
      data.single_group_of.emplace_back("a" + std::to_string(k),
                                        std::vector<std::string>{});
    }
    for (std::size_t i = 0; i < n; ++i) {
      data.y_true.push_back(static_cast<int>(rng() % 2));
      data.y_pred.push_back(static_cast<int>(rng() % 2));
      SubgroupKey key;
      for (std::size_t k = 0; k < d; ++k) {
        const std::string v = rng() % 2 ? "1" : "0";
        key.assignment.emplace_back("a" + std::to_string(k), v);
        data.single_group_of[k].second.push_back(v);
      }
      key_text.push_back(key.ToString());
      data.subgroup_of.push_back(std::move(key));
    }
    oracle::Metrics expected;
    try {
      expected = oracle::CountMetrics(data.y_true, data.y_pred, key_text);
    } catch (const std::domain_error&) {
      EXPECT_EQ(CodeOf([&] { Evaluate(data); }), ErrorCode::kMetricUndefined);
      continue;
    }
    ++checked;
    ExpectMatchesOracle(data, key_text);
    const MetricReport r = Evaluate(data);
    for (auto name : kFairnessMetrics) {
      EXPECT_GE(MetricValue(r, name), 0.0);
      EXPECT_LE(MetricValue(r, name), 1.0);
    }
    EXPECT_GE(r.performance.mcc, -1.0);
    EXPECT_LE(r.performance.mcc, 1.0);
  }
  EXPECT_EQ(checked, 100);
}

TEST(MetricValueTest, NamesAndRecord) {
  std::vector<int> t, p;
  std::vector<std::string> g;
  Add(t, p, g, "x", 1, 1, 7);
  Add(t, p, g, "x", 0, 0, 3);
  Add(t, p, g, "y", 1, 1, 4);
  Add(t, p, g, "y", 1, 0, 1);
  Add(t, p, g, "y", 0, 0, 6);
  const MetricReport r = Evaluate(OneAttribute(t, p, g));
  EXPECT_EQ(MetricValue(r, "wc_spd"), r.worst_case.spd);
  EXPECT_EQ(MetricValue(r, "mcc"), r.performance.mcc);
  EXPECT_EQ(MetricValue(r, "spd[g]"), r.per_attribute[0].second.spd);
  EXPECT_EQ(CodeOf([&] { MetricValue(r, "spd[h]"); }), ErrorCode::kUsage);
  EXPECT_EQ(CodeOf([&] { MetricValue(r, "f2"); }), ErrorCode::kUsage);
  const auto record = ToRecord(r);
  ASSERT_EQ(record.size(), 14u);
  EXPECT_EQ(record[0].first, "wc_spd");
  EXPECT_EQ(record[10].first, "mcc");
  EXPECT_EQ(record[11].first, "spd[g]");
  EXPECT_EQ(record[13].first, "eod[g]");
  EXPECT_TRUE(IsFairnessMetric("ac_eod"));
  EXPECT_FALSE(IsFairnessMetric("accuracy"));
  EXPECT_TRUE(IsPerformanceMetric("macro_f1"));
}

TEST(LabeledPredictionsTest, ShapeErrors) {
  auto data = OneAttribute({1, 0}, {1, 0}, {"a", "b"});
  data.y_pred.push_back(1);
  EXPECT_EQ(CodeOf([&] { data.Validate(); }), ErrorCode::kShape);
  auto bad = OneAttribute({1, 2}, {1, 0}, {"a", "b"});
  EXPECT_EQ(CodeOf([&] { bad.Validate(); }), ErrorCode::kShape);
}

}  // namespace
}  // namespace fairhome
