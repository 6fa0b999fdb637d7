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

#include "fairhome/mutate.h"

#include <Eigen/Dense>
#include <algorithm>
#include <set>
#include <string>

#include "fairhome/csv.h"
#include "fairhome/error.h"

namespace fairhome {

std::string_view MutationStrategyName(MutationStrategy strategy) {
  switch (strategy) {
    case MutationStrategy::kProtectedOnly:
      return "protected_only";
    case MutationStrategy::kCorrelatedFeatures:
      return "correlated_features";
    case MutationStrategy::kSingleAttributeOnly:
      return "single_attribute_only";
    case MutationStrategy::kMultiAttributeOnly:
      return "multi_attribute_only";
  }
  return "unknown";
}

CorrelationModel::CorrelationModel(std::vector<DummyColumn> columns,
                                   std::vector<FeatureModel> features,
                                   bool degenerate)
    : columns_(std::move(columns)),
      features_(std::move(features)),
      degenerate_(degenerate) {
  for (const FeatureModel& feature : features_) {
    if (feature.coefficients.size() != columns_.size()) {
      throw Error(ErrorCode::kShape,
                  "coefficient count does not match dummy columns");
    }
  }
}

double CorrelationModel::Predict(std::size_t feature,
                                 const ProtectedTuple& tuple) const {
  const FeatureModel& model = features_.at(feature);
  double value = model.intercept;
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    if (tuple.at(columns_[c].protected_position) == columns_[c].level) {
      value += model.coefficients[c];
    }
  }
  return value;
}

CorrelationModel FitExtrapolationModels(const Dataset& train) {
  const Schema& schema = train.schema();
  if (train.size() < 2) {
    throw Error(ErrorCode::kUsage,
                "correlation models need at least two training rows");
  }
  std::vector<std::size_t> targets;
  for (std::size_t a = 0; a < schema.num_attributes(); ++a) {
    if (schema.attributes()[a].kind == AttributeKind::kNumeric &&
        !schema.IsProtected(a)) {
      targets.push_back(a);
    }
  }
  if (targets.empty()) {
    throw Error(ErrorCode::kUsage,
                "correlated-feature mutation needs a numeric non-protected "
                "attribute");
  }

  // Dummy coding: every observed level except the first of each attribute.
  std::vector<CorrelationModel::DummyColumn> columns;
  for (std::size_t p = 0; p < schema.num_protected(); ++p) {
    std::set<std::string> levels;
    for (const Instance& row : train.rows()) {
      levels.insert(row.values[schema.protected_indices()[p]]);
    }
    for (auto it = std::next(levels.begin()); it != levels.end(); ++it) {
      columns.push_back({p, *it});
    }
  }

  const auto n = static_cast<Eigen::Index>(train.size());
  const auto k = static_cast<Eigen::Index>(columns.size());
  Eigen::MatrixXd design(n, k + 1);
  Eigen::MatrixXd response(n, static_cast<Eigen::Index>(targets.size()));
  for (Eigen::Index r = 0; r < n; ++r) {
    const Instance& row = train.rows()[r];
    design(r, 0) = 1.0;
    for (Eigen::Index c = 0; c < k; ++c) {
      const auto& column = columns[c];
      design(r, c + 1) =
          row.values[schema.protected_indices()[column.protected_position]] ==
                  column.level
              ? 1.0
              : 0.0;
    }
    for (std::size_t t = 0; t < targets.size(); ++t) {
      response(r, static_cast<Eigen::Index>(t)) =
          ParseNumber(row.values[targets[t]]);
    }
  }

  bool degenerate = k == 0;
  Eigen::MatrixXd solution;
  if (!degenerate) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (qr.rank() < k + 1) {
      degenerate = true;
    } else {
      solution = qr.solve(response);
    }
  }

  std::vector<CorrelationModel::FeatureModel> features;
  for (std::size_t t = 0; t < targets.size(); ++t) {
    const auto col = static_cast<Eigen::Index>(t);
    CorrelationModel::FeatureModel model;
    model.attribute_index = targets[t];
    model.min = response.col(col).minCoeff();
    model.max = response.col(col).maxCoeff();
    if (degenerate) {
      model.intercept = response.col(col).mean();
      model.coefficients.assign(columns.size(), 0.0);
    } else {
      model.intercept = solution(0, col);
      for (Eigen::Index c = 0; c < k; ++c) {
        model.coefficients.push_back(solution(c + 1, col));
      }
    }
    features.push_back(std::move(model));
  }
  return CorrelationModel(std::move(columns), std::move(features), degenerate);
}

std::size_t ProtectedDistance(const ProtectedTuple& a,
                              const ProtectedTuple& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kShape, "protected tuples of different width");
  }
  std::size_t distance = 0;
  for (std::size_t i = 0; i < a.size(); ++i) distance += a[i] != b[i];
  return distance;
}

MutantSet GenerateMutants(const Instance& instance, const Schema& schema,
                          const ProtectedDomains& domains,
                          MutationStrategy strategy,
                          const CorrelationModel* correlation) {
  if (instance.values.size() != schema.num_attributes()) {
    throw Error(ErrorCode::kShape, "instance has " +
                                       std::to_string(instance.values.size()) +
                                       " attributes, schema has " +
                                       std::to_string(schema.num_attributes()));
  }
  if (strategy == MutationStrategy::kCorrelatedFeatures &&
      correlation == nullptr) {
    throw Error(ErrorCode::kUsage,
                "correlated-feature mutation requires a correlation model");
  }
  const ProtectedTuple original = ProtectedTupleOf(instance, schema);

  // Per-feature prediction at the original tuple, computed once.
  std::vector<double> base_prediction;
  if (strategy == MutationStrategy::kCorrelatedFeatures) {
    for (std::size_t f = 0; f < correlation->features().size(); ++f) {
      base_prediction.push_back(correlation->Predict(f, original));
    }
  }

  MutantSet set;
  set.original = instance;
  set.strategy = strategy;
  for (const ProtectedTuple& combo : domains.joint_combos) {
    const std::size_t distance = ProtectedDistance(original, combo);
    if (distance == 0) continue;
    if (strategy == MutationStrategy::kSingleAttributeOnly && distance != 1) {
      continue;
    }
    if (strategy == MutationStrategy::kMultiAttributeOnly && distance < 2) {
      continue;
    }
    Instance mutant = instance;
    for (std::size_t p = 0; p < combo.size(); ++p) {
      mutant.values[schema.protected_indices()[p]] = combo[p];
    }
    if (strategy == MutationStrategy::kCorrelatedFeatures) {
      for (std::size_t f = 0; f < correlation->features().size(); ++f) {
        const auto& model = correlation->features()[f];
        const double delta =
            correlation->Predict(f, combo) - base_prediction[f];
        if (delta == 0.0) continue;
        std::string& cell = mutant.values[model.attribute_index];
        cell = FormatNumber(
            std::clamp(ParseNumber(cell) + delta, model.min, model.max));
      }
    }
    set.mutants.push_back(std::move(mutant));
  }
  return set;
}

void WriteMutantCsv(std::ostream& out, const Schema& schema,
                    std::span<const MutantSet> sets) {
  std::vector<std::string> header = {"instance_id", "role"};
  for (const Attribute& attribute : schema.attributes()) {
    header.push_back(attribute.name);
  }
  csv::WriteRow(out, header);
  for (std::size_t i = 0; i < sets.size(); ++i) {
    auto write = [&](const Instance& instance, const char* role) {
      std::vector<std::string> row = {std::to_string(i), role};
      row.insert(row.end(), instance.values.begin(), instance.values.end());
      csv::WriteRow(out, row);
    };
    write(sets[i].original, "original");
    for (const Instance& mutant : sets[i].mutants) write(mutant, "mutant");
  }
}

}  // namespace fairhome
