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

#ifndef FAIRHOME_DATA_H_
#define FAIRHOME_DATA_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <string>
#include <utility>
#include <vector>

namespace fairhome {

enum class AttributeKind { kCategorical, kNumeric };

struct Attribute {
  std::string name;
  AttributeKind kind = AttributeKind::kCategorical;

  friend bool operator==(const Attribute&, const Attribute&) = default;
};

// Describes the input attributes of a tabular decision problem. The label
// column is not an attribute; rows whose label equals `favorable_value` are
// mapped to decision 1.
class Schema {
 public:
  Schema() = default;
  // Throws Error(kSchema) when the invariants do not hold: protected names
  // must be distinct categorical attributes, at least one is required, and
  // the label column must not be an attribute.
  Schema(std::vector<Attribute> attributes,
         std::vector<std::string> protected_attributes,
         std::string label_column, std::string favorable_value);

  const std::vector<Attribute>& attributes() const { return attributes_; }
  const std::vector<std::string>& protected_attributes() const {
    return protected_;
  }
  const std::string& label_column() const { return label_column_; }
  const std::string& favorable_value() const { return favorable_value_; }

  std::size_t num_attributes() const { return attributes_.size(); }
  std::size_t num_protected() const { return protected_.size(); }

  // Index into attributes() of each protected attribute, in protected order.
  const std::vector<std::size_t>& protected_indices() const {
    return protected_indices_;
  }
  bool IsProtected(std::size_t attribute_index) const;
  // Returns the attribute index; throws Error(kSchema) for unknown names.
  std::size_t IndexOf(const std::string& name) const;

  friend bool operator==(const Schema&, const Schema&) = default;

 private:
  std::vector<Attribute> attributes_;
  std::vector<std::string> protected_;
  std::string label_column_;
  std::string favorable_value_;
  std::vector<std::size_t> protected_indices_;
};

// Reads a schema from a JSON document:
//   {"attributes": [{"name": "age", "kind": "categorical"}, ...],
//    "protected": ["sex", "age"],
//    "label_column": "credit",
//    "favorable_value": "good"}
Schema LoadSchema(const std::filesystem::path& path);
Schema ParseSchema(std::istream& in);

// One record's attribute cells, in schema order. Numeric cells hold the
// decimal text of the value.
struct Instance {
  std::vector<std::string> values;

  friend bool operator==(const Instance&, const Instance&) = default;
  friend auto operator<=>(const Instance&, const Instance&) = default;
};

class Dataset {
 public:
  Dataset() = default;
  // Validates row widths, label range and numeric cells.
  Dataset(Schema schema, std::vector<Instance> rows, std::vector<int> labels);

  const Schema& schema() const { return schema_; }
  const std::vector<Instance>& rows() const { return rows_; }
  const std::vector<int>& labels() const { return labels_; }
  std::size_t size() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }

  // New dataset holding the given rows, in the given order.
  Dataset Subset(const std::vector<std::size_t>& indices) const;

 private:
  Schema schema_;
  std::vector<Instance> rows_;
  std::vector<int> labels_;
};

// Loads a comma-separated file with a header row. Columns are matched by
// name, so their order is free and unknown columns are ignored. Cells are
// trimmed of surrounding whitespace.
Dataset LoadDataset(const std::filesystem::path& path, const Schema& schema);
Dataset ParseDataset(std::istream& in, const Schema& schema);

struct TrainTestSplit {
  Dataset train;
  Dataset test;
};

// Shuffles rows with `seed` and puts round(test_fraction * n) of them (at
// least one, at most n - 1) into the test partition. Throws Error(kUsage) for
// a fraction outside (0, 1) and Error(kData) for fewer than two rows.
TrainTestSplit Split(const Dataset& dataset, double test_fraction,
                     std::uint64_t seed);

// Values of the protected attributes of one record, in protected order.
using ProtectedTuple = std::vector<std::string>;

ProtectedTuple ProtectedTupleOf(const Instance& instance, const Schema& schema);

struct ProtectedDomains {
  // Protected attribute name with its sorted distinct observed values.
  std::vector<std::pair<std::string, std::vector<std::string>>> per_attribute;
  // Sorted distinct observed joint tuples.
  std::vector<ProtectedTuple> joint_combos;
  // Non-fatal findings, e.g. an attribute with a single observed value.
  std::vector<std::string> warnings;

  bool Contains(const ProtectedTuple& tuple) const;
  // Product of per-attribute domain sizes.
  std::size_t CartesianSize() const;
};

ProtectedDomains ComputeProtectedDomains(const Dataset& train);

struct SubgroupKey {
  // (protected attribute, value), one entry per protected attribute.
  std::vector<std::pair<std::string, std::string>> assignment;

  // "sex=female|age=young"
  std::string ToString() const;

  friend bool operator==(const SubgroupKey&, const SubgroupKey&) = default;
  friend auto operator<=>(const SubgroupKey&, const SubgroupKey&) = default;
};

std::vector<SubgroupKey> EnumerateSubgroups(const ProtectedDomains& domains);

// Per-attribute encoding learned from training data: one-hot blocks for
// categorical attributes, min-max scaling to [0, 1] for numeric ones.
class EncodingMap {
 public:
  struct Block {
    AttributeKind kind = AttributeKind::kCategorical;
    std::vector<std::string> levels;  // categorical: sorted training levels
    double min = 0.0;                 // numeric
    double max = 0.0;                 // numeric

    friend bool operator==(const Block&, const Block&) = default;
  };

  EncodingMap() = default;
  explicit EncodingMap(std::vector<Block> blocks);

  static EncodingMap Fit(const Dataset& train);

  const std::vector<Block>& blocks() const { return blocks_; }
  std::size_t dimension() const { return dimension_; }
  std::size_t num_attributes() const { return blocks_.size(); }

  // Unseen categorical levels encode to an all-zero block; numeric values
  // are clamped to the training range. Throws Error(kShape) when the
  // instance width does not match and Error(kData) for non-numeric text in
  // a numeric cell.
  std::vector<double> Encode(const Instance& instance) const;
  void EncodeInto(const Instance& instance, double* out) const;

  friend bool operator==(const EncodingMap&, const EncodingMap&) = default;

 private:
  std::vector<Block> blocks_;
  std::size_t dimension_ = 0;
};

// Parses a numeric cell. Throws Error(kData) if the text is not a finite
// number.
double ParseNumber(const std::string& text);
// Shortest decimal text that parses back to exactly `value`.
std::string FormatNumber(double value);

}  // namespace fairhome

#endif  // FAIRHOME_DATA_H_
