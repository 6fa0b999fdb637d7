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

#ifndef FAIRHOME_ENSEMBLE_H_
#define FAIRHOME_ENSEMBLE_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fairhome/data.h"
#include "fairhome/model.h"
#include "fairhome/mutate.h"

namespace fairhome {

enum class EnsembleStrategy { kMajorityVote, kAveraging, kWeightedAveraging };

std::string_view EnsembleStrategyName(EnsembleStrategy strategy);

// Combines the favorable-class probabilities of the original input (first)
// and its mutants into one decision.
//   kMajorityVote: 0 iff strictly more than half the decisions are 0.
//   kAveraging: 1 iff mean(p) >= 0.5.
//   kWeightedAveraging: weights |p - 0.5|; 1 iff sum(w p) / sum(w) >= 0.5,
//     falling back to the plain mean when every weight is 0.
// The result does not depend on the order of `probabilities`. Throws
// Error(kUsage) for an empty span.
int Aggregate(std::span<const double> probabilities, EnsembleStrategy strategy);

// Everything that went into one ensembled prediction.
struct EnsembleAudit {
  EnsembleStrategy strategy = EnsembleStrategy::kMajorityVote;
  std::vector<double> probabilities;  // [0] is the original input
  std::vector<double> weights;        // only for kWeightedAveraging
  int decision = 0;
};

EnsembleAudit AggregateWithAudit(std::vector<double> probabilities,
                                 EnsembleStrategy strategy);

// One line of JSON, no trailing newline.
std::string AuditRecordJson(const EnsembleAudit& audit);

struct FairhomeOptions {
  MutationStrategy mutation = MutationStrategy::kProtectedOnly;
  EnsembleStrategy ensemble = EnsembleStrategy::kMajorityVote;
  const CorrelationModel* correlation = nullptr;
};

// Queries the classifier on the instance and on each of its mutants and
// aggregates the answers.
EnsembleAudit FairhomePredictWithAudit(const Classifier& classifier,
                                       const Instance& instance,
                                       const Schema& schema,
                                       const ProtectedDomains& domains,
                                       const FairhomeOptions& options);

int FairhomePredict(const Classifier& classifier, const Instance& instance,
                    const Schema& schema, const ProtectedDomains& domains,
                    const FairhomeOptions& options = {});

}  // namespace fairhome

#endif  // FAIRHOME_ENSEMBLE_H_
