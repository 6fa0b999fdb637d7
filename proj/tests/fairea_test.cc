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

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "fairhome/error.h"
#include "test_util.h"

namespace fairhome {
namespace {

using testing::CodeOf;

// n rows over two binary protected attributes with a planted bias: rows in
// subgroup a=1 are predicted favorable more often.
LabeledPredictions Fixture(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  LabeledPredictions data;
  data.single_group_of = {{"a", {}}, {"b", {}}};
  for (std::size_t i = 0; i < n; ++i) {
    const std::string a = u(rng) < 0.5 ? "0" : "1";
    const std::string b = u(rng) < 0.3 ? "0" : "1";
    const int y = u(rng) < 0.6 ? 1 : 0;
    int p = u(rng) < 0.85 ? y : 1 - y;
    if (a == "1" && u(rng) < 0.2) p = 1;
    data.y_true.push_back(y);
    data.y_pred.push_back(p);
    data.single_group_of[0].second.push_back(a);
    data.single_group_of[1].second.push_back(b);
    data.subgroup_of.push_back({{{"a", a}, {"b", b}}});
  }
  return data;
}

std::vector<double> MetricsRow(const MetricReport& r) {
  std::vector<double> row;
  for (auto name : kFairnessMetrics) row.push_back(MetricValue(r, name));
  for (auto name : kPerformanceMetrics) row.push_back(MetricValue(r, name));
  return row;
}

TradeoffPoint Point(double fairness, double performance) {
  return {"wc_spd", "accuracy", fairness, performance};
}

// Hand-built curve: (0.30, 0.80), (0.10, 0.70), (0.00, 0.60).
TradeoffBaseline ThreePoints() {
  TradeoffBaseline b;
  b.degrees = {0.0, 0.5, 1.0};
  b.points = {Point(0.30, 0.80), Point(0.10, 0.70), Point(0.00, 0.60)};
  b.reps_per_degree = 1;
  return b;
}

TEST(BaselineTest, DegreeZeroIsTheOriginalModel) {
  const auto data = Fixture(300, 1);
  const auto grid = BuildBaselineGrid(data, DefaultDegrees(), 10, 7);
  ASSERT_EQ(grid.rows.size(), 11u);
  EXPECT_EQ(grid.rows.front(), MetricsRow(Evaluate(data)));
  EXPECT_EQ(grid.reps_per_degree, 10);
}

TEST(BaselineTest, DegreeOneIsTheMajorityPredictor) {
  const auto data = Fixture(300, 2);
  const auto grid = BuildBaselineGrid(data, DefaultDegrees(), 10, 7);
  const auto& last = grid.rows.back();
  for (std::size_t k = 0; k < kFairnessMetrics.size(); ++k) {
    EXPECT_EQ(last[k], 0.0) << kFairnessMetrics[k];
  }
  std::size_t positives = 0;
  for (int y : data.y_true) positives += y;
  const double share =
      static_cast<double>(std::max(positives, data.size() - positives)) /
      static_cast<double>(data.size());
  EXPECT_EQ(last[kFairnessMetrics.size()], share);
}

TEST(BaselineTest, MajorityTieGoesToFavorable) {
  LabeledPredictions data;
  data.single_group_of = {{"a", {"x", "x", "y", "y"}}};
  for (const char* v : {"x", "x", "y", "y"}) {
    data.subgroup_of.push_back({{{"a", v}}});
  }
  data.y_true = {1, 0, 1, 0};
  data.y_pred = {0, 0, 1, 0};
  const auto grid = BuildBaselineGrid(data, {0.0, 1.0}, 1, 0);
  // All-favorable: recall of class 1 is 1, of class 0 is 0.
  EXPECT_EQ(grid.rows.back()[kFairnessMetrics.size() + 2], 0.5);
  EXPECT_EQ(grid.rows.back()[kFairnessMetrics.size()], 0.5);
}

TEST(BaselineTest, DeterministicGivenSeed) {
  const auto data = Fixture(200, 3);
  const auto a =
      BuildBaseline(data, "wc_spd", "accuracy", DefaultDegrees(), 10, 42);
  const auto b =
      BuildBaseline(data, "wc_spd", "accuracy", DefaultDegrees(), 10, 42);
  ASSERT_EQ(a.points.size(), b.points.size());
  for (std::size_t k = 0; k < a.points.size(); ++k) {
    EXPECT_EQ(a.points[k].fairness, b.points[k].fairness);
    EXPECT_EQ(a.points[k].performance, b.points[k].performance);
  }
}

TEST(BaselineTest, MonteCarloConvergence) {
  const auto data = Fixture(500, 4);
  const std::vector<double> degrees = {0.0, 0.5, 1.0};
  auto mid = [&](int reps, std::uint64_t seed) {
    return BuildBaselineGrid(data, degrees, reps, seed).rows[1];
  };
  const auto few_a = mid(1, 11);
  const auto few_b = mid(1, 12);
  EXPECT_NE(few_a, few_b);

  const auto five_a = mid(5, 11);
  const auto many_a = mid(200, 11);
  const auto many_b = mid(200, 12);
  double worst_many = 0.0;
  double worst_five = 0.0;
  for (std::size_t k = 0; k < many_a.size(); ++k) {
    worst_many = std::max(worst_many, std::fabs(many_a[k] - many_b[k]));
    worst_five = std::max(worst_five, std::fabs(five_a[k] - many_a[k]));
  }
  EXPECT_LE(worst_many, 0.01);
  EXPECT_GT(worst_five, worst_many);
}

TEST(BaselineTest, ExpectedAccuracyIsLinearInDegree) {
  // Each replaced row becomes correct iff its label is the majority, so the
  // mean accuracy is (1 - t) acc_0 + t share.
  const auto data = Fixture(500, 5);
  const auto grid = BuildBaselineGrid(data, DefaultDegrees(), 200, 9);
  const std::size_t acc = kFairnessMetrics.size();
  const double acc0 = grid.rows.front()[acc];
  const double share = grid.rows.back()[acc];
  for (std::size_t k = 0; k < grid.degrees.size(); ++k) {
    const double t = grid.degrees[k];
    EXPECT_NEAR(grid.rows[k][acc], (1 - t) * acc0 + t * share, 0.005) << t;
  }
}

TEST(BaselineTest, SelectAndErrors) {
  const auto data = Fixture(100, 6);
  const auto grid = BuildBaselineGrid(data, DefaultDegrees(), 3, 1);
  const auto b = grid.Select("ac_eod", "mcc");
  ASSERT_EQ(b.points.size(), 11u);
  EXPECT_EQ(b.points[3].fairness, grid.rows[3][5]);
  EXPECT_EQ(b.points[3].performance, grid.rows[3][10]);
  EXPECT_EQ(b.points[3].fairness_metric, "ac_eod");
  EXPECT_EQ(CodeOf([&] { grid.Select("f1", "mcc"); }), ErrorCode::kUsage);
  EXPECT_EQ(CodeOf([&] { grid.Select("mcc", "wc_spd"); }), ErrorCode::kUsage);
  EXPECT_EQ(CodeOf([&] { BuildBaselineGrid(data, {0.0, 0.5}, 3, 1); }),
            ErrorCode::kUsage);
  EXPECT_EQ(
      CodeOf([&] { BuildBaselineGrid(data, {0.0, 0.6, 0.5, 1.0}, 3, 1); }),
      ErrorCode::kUsage);
  EXPECT_EQ(CodeOf([&] { BuildBaselineGrid(data, DefaultDegrees(), 0, 1); }),
            ErrorCode::kUsage);
  EXPECT_EQ(CodeOf([&] {
              BuildBaseline(data, "wc_spd", "auc", DefaultDegrees(), 1, 1);
            }),
            ErrorCode::kUsage);
}

TEST(InterpolateTest, HandComputed) {
  const auto b = ThreePoints();
  bool clamped = true;
  EXPECT_NEAR(InterpolateFairness(b, 0.75, &clamped), 0.20, 1e-15);
  EXPECT_FALSE(clamped);
  EXPECT_NEAR(InterpolateFairness(b, 0.65, &clamped), 0.05, 1e-15);
  EXPECT_EQ(InterpolateFairness(b, 0.70), 0.10);
  EXPECT_EQ(InterpolateFairness(b, 0.55, &clamped), 0.00);
  EXPECT_TRUE(clamped);
  EXPECT_EQ(InterpolateFairness(b, 0.90, &clamped), 0.30);
  EXPECT_TRUE(clamped);
}

TEST(ClassifyTest, Examples) {
  const auto b = ThreePoints();
  const auto orig = b.points.front();
  auto region = [&](double f, double p) {
    return ClassifyCase(Point(f, p), orig, b).region;
  };
  EXPECT_EQ(region(0.2, 0.85), TradeoffRegion::kWinWin);
  EXPECT_EQ(region(0.4, 0.70), TradeoffRegion::kLoseLose);
  EXPECT_EQ(region(0.4, 0.80), TradeoffRegion::kInverted);
  EXPECT_EQ(region(0.3, 0.80), TradeoffRegion::kGood);
  EXPECT_EQ(region(0.3, 0.81), TradeoffRegion::kWinWin);
  EXPECT_EQ(region(0.3, 0.70), TradeoffRegion::kLoseLose);
  // Midway between (0.30, 0.80) and (0.10, 0.70): the curve is at 0.20.
  EXPECT_EQ(region(0.19, 0.75), TradeoffRegion::kGood);
  EXPECT_EQ(region(0.21, 0.75), TradeoffRegion::kPoor);
  EXPECT_EQ(region(0.20, 0.75), TradeoffRegion::kPoor);

  const auto below = ClassifyCase(Point(0.0, 0.5), orig, b);
  EXPECT_TRUE(below.clamped);
  EXPECT_EQ(below.region, TradeoffRegion::kPoor);
  EXPECT_FALSE(ClassifyCase(Point(0.1, 0.75), orig, b).clamped);

  TradeoffPoint other = Point(0.1, 0.75);
  other.performance_metric = "mcc";
  EXPECT_EQ(CodeOf([&] { ClassifyCase(other, orig, b); }), ErrorCode::kUsage);
}

TEST(ClassifyTest, MonotoneInFairnessAndTotal) {
  const auto b = ThreePoints();
  const auto orig = b.points.front();
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> perf(0.5, 0.9);
  for (int trial = 0; trial < 500; ++trial) {
    const double p = perf(rng);
    bool seen_good = false;
    for (double f = 0.5; f >= -0.001; f -= 0.01) {
      const auto r = ClassifyCase(Point(f, p), orig, b).region;
      // Every point lands in one of the five named regions.
      EXPECT_FALSE(TradeoffRegionName(r).empty());
      if (r == TradeoffRegion::kGood) seen_good = true;
      if (seen_good) {
        EXPECT_NE(r, TradeoffRegion::kPoor);
      }
    }
  }
}

TEST(ClassifyTest, RegionNames) {
  EXPECT_EQ(TradeoffRegionName(TradeoffRegion::kWinWin), "win_win");
  EXPECT_EQ(TradeoffRegionName(TradeoffRegion::kGood), "good");
  EXPECT_EQ(TradeoffRegionName(TradeoffRegion::kPoor), "poor");
  EXPECT_EQ(TradeoffRegionName(TradeoffRegion::kLoseLose), "lose_lose");
  EXPECT_EQ(TradeoffRegionName(TradeoffRegion::kInverted), "inverted");
}

TEST(BaselineCsvTest, Format) {
  const auto b = ThreePoints();
  std::ostringstream out;
  WriteBaselineCsv(out, b);
  EXPECT_EQ(out.str(),
            "degree,wc_spd,accuracy\n0,0.3,0.8\n0.5,0.1,0.7\n1,0,0.6\n");
}

}  // namespace
}  // namespace fairhome
