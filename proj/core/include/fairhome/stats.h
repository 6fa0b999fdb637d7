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

#ifndef FAIRHOME_STATS_H_
#define FAIRHOME_STATS_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fairhome {

enum class PValueMethod {
  // Exact when both samples together have at most kExactLimit values and
  // no ties; normal approximation otherwise.
  kAuto,
  kExact,
  kAsymptotic,
};

inline constexpr std::size_t kExactLimit = 12;

struct MannWhitneyResult {
  // U statistic of the first sample: its rank sum minus n_a (n_a + 1) / 2.
  double u = 0.0;
  double p_value = 1.0;  // two-tailed
  bool exact = false;
};

// Midranks for ties. The asymptotic p-value uses the tie-corrected variance
// and a 0.5 continuity correction. Throws Error(kUsage) for an empty sample,
// and for kExact on tied data.
MannWhitneyResult MannWhitneyU(std::span<const double> a,
                               std::span<const double> b,
                               PValueMethod method = PValueMethod::kAuto);

// Number of ways to order m values of one sample and n of the other so that
// the first sample's U equals u, for u = 0 .. m n.
std::vector<double> UDistributionCounts(std::size_t m, std::size_t n);

enum class WtlLabel { kWin, kTie, kLoss };

std::string_view WtlLabelName(WtlLabel label);

enum class Direction { kMethodBetter, kBaselineBetter, kEqual };

struct WtlOutcome {
  WtlLabel label = WtlLabel::kTie;
  double p_value = 1.0;
  Direction direction = Direction::kEqual;
};

double Median(std::span<const double> values);

// Tie when p >= alpha. Otherwise the side with the better median wins; equal
// medians fall back to the U statistic.
WtlOutcome WinTieLoss(std::span<const double> method_values,
                      std::span<const double> baseline_values,
                      double alpha = 0.05, bool lower_is_better = true);

struct WtlCounts {
  int win = 0;
  int tie = 0;
  int loss = 0;

  void Add(WtlLabel label);
  // "w/t/l"
  std::string ToString() const;
};

}  // namespace fairhome

#endif  // FAIRHOME_STATS_H_
