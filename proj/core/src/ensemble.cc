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

#include "fairhome/ensemble.h"

#include <algorithm>
#include <cmath>

#include "fairhome/error.h"
#include "json.hpp"

namespace fairhome {
namespace {

// Sums in ascending order so the result is independent of input order.
double SortedSum(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum;
}

std::vector<double> DistanceWeights(std::span<const double> probabilities) {
  std::vector<double> weights;
  weights.reserve(probabilities.size());
  for (double p : probabilities) weights.push_back(std::fabs(p - 0.5));
  return weights;
}

}  // namespace

std::string_view EnsembleStrategyName(EnsembleStrategy strategy) {
  switch (strategy) {
    case EnsembleStrategy::kMajorityVote:
      return "majority_vote";
    case EnsembleStrategy::kAveraging:
      return "averaging";
    case EnsembleStrategy::kWeightedAveraging:
      return "weighted_averaging";
  }
  return "unknown";
}

int Aggregate(std::span<const double> probabilities,
              EnsembleStrategy strategy) {
  if (probabilities.empty()) {
    throw Error(ErrorCode::kUsage, "nothing to aggregate");
  }
  const double n = static_cast<double>(probabilities.size());
  switch (strategy) {
    case EnsembleStrategy::kMajorityVote: {
      std::size_t unfavorable = 0;
      for (double p : probabilities) unfavorable += Decide(p) == 0;
      return 2 * unfavorable > probabilities.size() ? 0 : 1;
    }
    case EnsembleStrategy::kAveraging: {
      const double mean =
          SortedSum({probabilities.begin(), probabilities.end()}) / n;
      return Decide(mean);
    }
    case EnsembleStrategy::kWeightedAveraging: {
      // Pairs are sorted together so both sums see the same order.
      std::vector<std::pair<double, double>> terms;
      terms.reserve(probabilities.size());
      for (double p : probabilities) terms.emplace_back(std::fabs(p - 0.5), p);
      std::sort(terms.begin(), terms.end());
      double weight_sum = 0.0;
      double weighted = 0.0;
      for (const auto& [w, p] : terms) {
        weight_sum += w;
        weighted += w * p;
      }
      if (weight_sum == 0.0) {
        return Decide(SortedSum({probabilities.begin(), probabilities.end()}) /
                      n);
      }
      return Decide(weighted / weight_sum);
    }
  }
  throw Error(ErrorCode::kUsage, "unknown ensemble strategy");
}

EnsembleAudit AggregateWithAudit(std::vector<double> probabilities,
                                 EnsembleStrategy strategy) {
  EnsembleAudit audit;
  audit.strategy = strategy;
  audit.decision = Aggregate(probabilities, strategy);
  if (strategy == EnsembleStrategy::kWeightedAveraging) {
    audit.weights = DistanceWeights(probabilities);
  }
  audit.probabilities = std::move(probabilities);
  return audit;
}

std::string AuditRecordJson(const EnsembleAudit& audit) {
  nlohmann::json record = {
      {"strategy", EnsembleStrategyName(audit.strategy)},
      {"probabilities", audit.probabilities},
      {"decision", audit.decision},
  };
  if (!audit.weights.empty()) record["weights"] = audit.weights;
  return record.dump();
}

EnsembleAudit FairhomePredictWithAudit(const Classifier& classifier,
                                       const Instance& instance,
                                       const Schema& schema,
                                       const ProtectedDomains& domains,
                                       const FairhomeOptions& options) {
  const MutantSet set = GenerateMutants(instance, schema, domains,
                                        options.mutation, options.correlation);
  std::vector<double> probabilities;
  probabilities.reserve(set.mutants.size() + 1);
  probabilities.push_back(classifier.PredictProba(set.original));
  for (const Instance& mutant : set.mutants) {
    probabilities.push_back(classifier.PredictProba(mutant));
  }
  return AggregateWithAudit(std::move(probabilities), options.ensemble);
}

int FairhomePredict(const Classifier& classifier, const Instance& instance,
                    const Schema& schema, const ProtectedDomains& domains,
                    const FairhomeOptions& options) {
  return FairhomePredictWithAudit(classifier, instance, schema, domains,
                                  options)
      .decision;
}

}  // namespace fairhome
