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

#ifndef FAIRHOME_MUTATE_H_
#define FAIRHOME_MUTATE_H_

#include <cstddef>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fairhome/data.h"

namespace fairhome {

enum class MutationStrategy {
  // Every observed protected combination other than the original's.
  kProtectedOnly,
  // As kProtectedOnly, with numeric non-protected features shifted by a
  // linear model of the protected attributes.
  kCorrelatedFeatures,
  // Only combinations that differ from the original in exactly one
  // protected attribute.
  kSingleAttributeOnly,
  // Only combinations that differ in two or more protected attributes.
  kMultiAttributeOnly,
};

std::string_view MutationStrategyName(MutationStrategy strategy);

// Least-squares fit of each numeric non-protected feature on dummy-coded
// protected attributes (first level of each attribute is the reference).
class CorrelationModel {
 public:
  struct FeatureModel {
    std::size_t attribute_index = 0;
    double intercept = 0.0;
    // One coefficient per dummy column, see dummy_columns().
    std::vector<double> coefficients;
    // Training range; adjusted values are clamped into it.
    double min = 0.0;
    double max = 0.0;
  };

  // A dummy column: protected position (index into protected_attributes())
  // and the level it indicates.
  struct DummyColumn {
    std::size_t protected_position = 0;
    std::string level;
  };

  CorrelationModel() = default;
  CorrelationModel(std::vector<DummyColumn> columns,
                   std::vector<FeatureModel> features, bool degenerate);

  // Predicted value of feature `feature` for the given protected tuple.
  double Predict(std::size_t feature, const ProtectedTuple& tuple) const;

  const std::vector<DummyColumn>& dummy_columns() const { return columns_; }
  const std::vector<FeatureModel>& features() const { return features_; }
  // True when the design matrix was rank deficient and every feature fell
  // back to its mean.
  bool degenerate() const { return degenerate_; }

 private:
  std::vector<DummyColumn> columns_;
  std::vector<FeatureModel> features_;
  bool degenerate_ = false;
};

// Throws Error(kUsage) when the training set has fewer than two rows or no
// numeric non-protected feature.
CorrelationModel FitExtrapolationModels(const Dataset& train);

struct MutantSet {
  Instance original;
  std::vector<Instance> mutants;
  MutationStrategy strategy = MutationStrategy::kProtectedOnly;
};

// Mutants follow the lexicographic order of the observed joint combos.
// Throws Error(kUsage) for kCorrelatedFeatures without a correlation model
// and Error(kShape) for an instance of the wrong width.
MutantSet GenerateMutants(const Instance& instance, const Schema& schema,
                          const ProtectedDomains& domains,
                          MutationStrategy strategy,
                          const CorrelationModel* correlation = nullptr);

// Number of protected attributes whose values differ.
std::size_t ProtectedDistance(const ProtectedTuple& a, const ProtectedTuple& b);

// Audit dump: one row per original and per mutant, columns
// instance_id,role,<attributes...>.
void WriteMutantCsv(std::ostream& out, const Schema& schema,
                    std::span<const MutantSet> sets);

}  // namespace fairhome

#endif  // FAIRHOME_MUTATE_H_
