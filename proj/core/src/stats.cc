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

#include "fairhome/stats.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fairhome/error.h"

namespace fairhome {
namespace {

void CheckSample(std::span<const double> values, const char* name) {
  if (values.empty()) {
    throw Error(ErrorCode::kUsage, std::string(name) + " sample is empty");
  }
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kData,
                  std::string(name) + " sample has a non-finite value");
    }
  }
}

}  // namespace

std::vector<double> UDistributionCounts(std::size_t m, std::size_t n) {
  // counts[j][u]: arrangements of i values of the first sample among j of the
  // second with statistic u, built up one first-sample value at a time.
  std::vector<std::vector<double>> prev(n + 1, std::vector<double>(1, 1.0));
  for (std::size_t i = 1; i <= m; ++i) {
    std::vector<std::vector<double>> cur(n + 1);
    for (std::size_t j = 0; j <= n; ++j) {
      cur[j].assign(i * j + 1, 0.0);
      // Largest value belongs to the first sample: it beats all j others.
      const auto& a = prev[j];
      for (std::size_t u = 0; u < a.size(); ++u) cur[j][u + j] += a[u];
      if (j > 0) {
        const auto& b = cur[j - 1];
        for (std::size_t u = 0; u < b.size(); ++u) cur[j][u] += b[u];
      }
    }
    prev = std::move(cur);
  }
  return prev[n];
}

MannWhitneyResult MannWhitneyU(std::span<const double> a,
                               std::span<const double> b, PValueMethod method) {
  CheckSample(a, "first");
  CheckSample(b, "second");
  const std::size_t m = a.size();
  const std::size_t n = b.size();
  const std::size_t total = m + n;

  std::vector<std::pair<double, std::size_t>> pooled;
  pooled.reserve(total);
  for (std::size_t i = 0; i < m; ++i) pooled.emplace_back(a[i], i);
  for (std::size_t i = 0; i < n; ++i) pooled.emplace_back(b[i], m + i);
  std::sort(pooled.begin(), pooled.end());

  double rank_sum_a = 0.0;
  double tie_term = 0.0;
  bool ties = false;
  for (std::size_t i = 0; i < total;) {
    std::size_t j = i;
    while (j < total && pooled[j].first == pooled[i].first) ++j;
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);
    const double t = static_cast<double>(j - i);
    if (t > 1) {
      ties = true;
      tie_term += t * t * t - t;
    }
    for (std::size_t k = i; k < j; ++k) {
      if (pooled[k].second < m) rank_sum_a += midrank;
    }
    i = j;
  }

  MannWhitneyResult result;
  const double md = static_cast<double>(m);
  const double nd = static_cast<double>(n);
  result.u = rank_sum_a - md * (md + 1.0) / 2.0;
  // Both tails are symmetric, so work from the smaller statistic.
  const double u_low = std::min(result.u, md * nd - result.u);

  const bool exact =
      method == PValueMethod::kExact ||
      (method == PValueMethod::kAuto && total <= kExactLimit && !ties);
  if (exact) {
    if (ties) {
      throw Error(ErrorCode::kUsage, "exact p-value requires tie-free samples");
    }
    const auto counts = UDistributionCounts(m, n);
    const double all = std::accumulate(counts.begin(), counts.end(), 0.0);
    const auto limit = static_cast<std::size_t>(std::llround(u_low));
    double tail = 0.0;
    for (std::size_t u = 0; u <= limit; ++u) tail += counts[u];
    result.p_value = std::min(1.0, 2.0 * tail / all);
    result.exact = true;
    return result;
  }

  const double big_n = md + nd;
  const double variance =
      md * nd / 12.0 * ((big_n + 1.0) - tie_term / (big_n * (big_n - 1.0)));
  if (variance <= 0.0) {
    result.p_value = 1.0;
    return result;
  }
  const double deviation = std::max(0.0, md * nd / 2.0 - u_low - 0.5);
  const double z = deviation / std::sqrt(variance);
  result.p_value = std::min(1.0, std::erfc(z / std::sqrt(2.0)));
  return result;
}

std::string_view WtlLabelName(WtlLabel label) {
  switch (label) {
    case WtlLabel::kWin:
      return "win";
    case WtlLabel::kTie:
      return "tie";
    case WtlLabel::kLoss:
      return "loss";
  }
  return "unknown";
}

double Median(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::kUsage, "median of empty sample");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t mid = sorted.size() / 2;
  if (sorted.size() % 2 == 1) return sorted[mid];
  return 0.5 * (sorted[mid - 1] + sorted[mid]);
}

WtlOutcome WinTieLoss(std::span<const double> method_values,
                      std::span<const double> baseline_values, double alpha,
                      bool lower_is_better) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::kUsage, "alpha must lie in (0, 1)");
  }
  const auto test = MannWhitneyU(method_values, baseline_values);
  WtlOutcome outcome;
  outcome.p_value = test.p_value;

  const double method_median = Median(method_values);
  const double baseline_median = Median(baseline_values);
  // Sign of (method - baseline) in central tendency.
  int sign = 0;
  if (method_median != baseline_median) {
    sign = method_median < baseline_median ? -1 : 1;
  } else {
    const double center = 0.5 * static_cast<double>(method_values.size()) *
                          static_cast<double>(baseline_values.size());
    if (test.u != center) sign = test.u < center ? -1 : 1;
  }
  if (sign != 0 && !lower_is_better) sign = -sign;
  outcome.direction = sign < 0   ? Direction::kMethodBetter
                      : sign > 0 ? Direction::kBaselineBetter
                                 : Direction::kEqual;

  if (test.p_value < alpha) {
    if (outcome.direction == Direction::kMethodBetter) {
      outcome.label = WtlLabel::kWin;
    } else if (outcome.direction == Direction::kBaselineBetter) {
      outcome.label = WtlLabel::kLoss;
    }
  }
  return outcome;
}

void WtlCounts::Add(WtlLabel label) {
  switch (label) {
    case WtlLabel::kWin:
      ++win;
      break;
    case WtlLabel::kTie:
      ++tie;
      break;
    case WtlLabel::kLoss:
      ++loss;
      break;
  }
}

std::string WtlCounts::ToString() const {
  return std::to_string(win) + "/" + std::to_string(tie) + "/" +
         std::to_string(loss);
}

}  // namespace fairhome
