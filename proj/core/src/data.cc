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

#include "fairhome/data.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <system_error>

#include "fairhome/csv.h"
#include "fairhome/error.h"
#include "json.hpp"
#include "random.h"

namespace fairhome {
namespace {

using nlohmann::json;

AttributeKind ParseKind(const std::string& kind) {
  if (kind == "categorical") return AttributeKind::kCategorical;
  if (kind == "numeric") return AttributeKind::kNumeric;
  throw Error(ErrorCode::kSchema, "unknown attribute kind '" + kind + "'");
}

}  // namespace

Schema::Schema(std::vector<Attribute> attributes,
               std::vector<std::string> protected_attributes,
               std::string label_column, std::string favorable_value)
    : attributes_(std::move(attributes)),
      protected_(std::move(protected_attributes)),
      label_column_(std::move(label_column)),
      favorable_value_(std::move(favorable_value)) {
  std::set<std::string> names;
  for (const Attribute& attribute : attributes_) {
    if (attribute.name.empty()) {
      throw Error(ErrorCode::kSchema, "attribute with empty name");
    }
    if (!names.insert(attribute.name).second) {
      throw Error(ErrorCode::kSchema,
                  "duplicate attribute '" + attribute.name + "'");
    }
  }
  if (label_column_.empty()) {
    throw Error(ErrorCode::kSchema, "label column is not set");
  }
  if (names.count(label_column_) > 0) {
    throw Error(ErrorCode::kSchema,
                "label column '" + label_column_ + "' is also an attribute");
  }
  if (protected_.empty()) {
    throw Error(ErrorCode::kSchema, "at least one protected attribute needed");
  }
  std::set<std::string> seen;
  for (const std::string& name : protected_) {
    if (!seen.insert(name).second) {
      throw Error(ErrorCode::kSchema,
                  "protected attribute '" + name + "' listed twice");
    }
    const std::size_t index = IndexOf(name);
    if (attributes_[index].kind != AttributeKind::kCategorical) {
      throw Error(ErrorCode::kSchema,
                  "protected attribute '" + name + "' must be categorical");
    }
    protected_indices_.push_back(index);
  }
}

bool Schema::IsProtected(std::size_t attribute_index) const {
  return std::find(protected_indices_.begin(), protected_indices_.end(),
                   attribute_index) != protected_indices_.end();
}

std::size_t Schema::IndexOf(const std::string& name) const {
  for (std::size_t i = 0; i < attributes_.size(); ++i) {
    if (attributes_[i].name == name) return i;
  }
  throw Error(ErrorCode::kSchema, "unknown attribute '" + name + "'");
}

Schema ParseSchema(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kSchema,
                std::string("malformed schema: ") + e.what());
  }
  try {
    std::vector<Attribute> attributes;
    for (const json& entry : doc.at("attributes")) {
      attributes.push_back({entry.at("name").get<std::string>(),
                            ParseKind(entry.at("kind").get<std::string>())});
    }
    return Schema(std::move(attributes),
                  doc.at("protected").get<std::vector<std::string>>(),
                  doc.at("label_column").get<std::string>(),
                  doc.at("favorable_value").get<std::string>());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kSchema, std::string("schema: ") + e.what());
  }
}

Schema LoadSchema(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return ParseSchema(in);
}

double ParseNumber(const std::string& text) {
  const std::string_view trimmed = csv::Trim(text);
  double value = 0.0;
  const char* first = trimmed.data();
  const char* last = first + trimmed.size();
  if (!trimmed.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (trimmed.empty() || ec != std::errc() || ptr != last ||
      !std::isfinite(value)) {
    throw Error(ErrorCode::kData, "not a finite number: '" + text + "'");
  }
  return value;
}

std::string FormatNumber(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, ptr);
}

Dataset::Dataset(Schema schema, std::vector<Instance> rows,
                 std::vector<int> labels)
    : schema_(std::move(schema)),
      rows_(std::move(rows)),
      labels_(std::move(labels)) {
  if (rows_.size() != labels_.size()) {
    throw Error(ErrorCode::kData, "row and label counts differ");
  }
  const std::size_t width = schema_.num_attributes();
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    if (rows_[r].values.size() != width) {
      throw Error(ErrorCode::kData, "row " + std::to_string(r) + " has " +
                                        std::to_string(rows_[r].values.size()) +
                                        " cells, expected " +
                                        std::to_string(width));
    }
    if (labels_[r] != 0 && labels_[r] != 1) {
      throw Error(ErrorCode::kData, "label outside {0, 1}");
    }
    for (std::size_t a = 0; a < width; ++a) {
      if (rows_[r].values[a].empty()) {
        throw Error(ErrorCode::kData, "row " + std::to_string(r) +
                                          ": missing value for '" +
                                          schema_.attributes()[a].name + "'");
      }
      if (schema_.attributes()[a].kind == AttributeKind::kNumeric) {
        ParseNumber(rows_[r].values[a]);
      }
    }
  }
}

Dataset Dataset::Subset(const std::vector<std::size_t>& indices) const {
  std::vector<Instance> rows;
  std::vector<int> labels;
  rows.reserve(indices.size());
  labels.reserve(indices.size());
  for (std::size_t i : indices) {
    rows.push_back(rows_.at(i));
    labels.push_back(labels_.at(i));
  }
  Dataset subset;
  subset.schema_ = schema_;
  subset.rows_ = std::move(rows);
  subset.labels_ = std::move(labels);
  return subset;
}

Dataset ParseDataset(std::istream& in, const Schema& schema) {
  auto header = csv::ReadRow(in);
  if (!header) throw Error(ErrorCode::kSchema, "empty file, no header row");
  std::map<std::string, std::size_t> column_of;
  for (std::size_t c = 0; c < header->size(); ++c) {
    column_of[std::string(csv::Trim((*header)[c]))] = c;
  }
  auto find_column = [&](const std::string& name) {
    auto it = column_of.find(name);
    if (it == column_of.end()) {
      throw Error(ErrorCode::kSchema, "missing column '" + name + "'");
    }
    return it->second;
  };
  std::vector<std::size_t> attribute_columns;
  for (const Attribute& attribute : schema.attributes()) {
    attribute_columns.push_back(find_column(attribute.name));
  }
  const std::size_t label_column = find_column(schema.label_column());

  std::vector<Instance> rows;
  std::vector<int> labels;
  std::set<std::string> label_values;
  std::size_t line = 1;
  while (auto fields = csv::ReadRow(in)) {
    ++line;
    if (fields->size() == 1 && csv::Trim((*fields)[0]).empty()) continue;
    if (fields->size() != header->size()) {
      throw Error(ErrorCode::kData, "line " + std::to_string(line) + " has " +
                                        std::to_string(fields->size()) +
                                        " cells, header has " +
                                        std::to_string(header->size()));
    }
    Instance instance;
    instance.values.reserve(attribute_columns.size());
    for (std::size_t a = 0; a < attribute_columns.size(); ++a) {
      std::string cell(csv::Trim((*fields)[attribute_columns[a]]));
      if (cell.empty()) {
        throw Error(ErrorCode::kData, "line " + std::to_string(line) +
                                          ": missing value for '" +
                                          schema.attributes()[a].name + "'");
      }
      if (schema.attributes()[a].kind == AttributeKind::kNumeric) {
        try {
          ParseNumber(cell);
        } catch (const Error& e) {
          throw Error(ErrorCode::kData, "line " + std::to_string(line) + ", '" +
                                            schema.attributes()[a].name +
                                            "': not a finite number '" + cell +
                                            "'");
        }
      }
      instance.values.push_back(std::move(cell));
    }
    const std::string label(csv::Trim((*fields)[label_column]));
    if (label.empty()) {
      throw Error(ErrorCode::kData,
                  "line " + std::to_string(line) + ": missing label");
    }
    label_values.insert(label);
    if (label_values.size() > 2) {
      throw Error(ErrorCode::kData,
                  "label column '" + schema.label_column() +
                      "' has more than two values; only binary labels are "
                      "supported");
    }
    labels.push_back(label == schema.favorable_value() ? 1 : 0);
    rows.push_back(std::move(instance));
  }
  if (label_values.size() == 2 &&
      label_values.count(schema.favorable_value()) == 0) {
    throw Error(ErrorCode::kData, "favorable value '" +
                                      schema.favorable_value() +
                                      "' does not occur among the labels");
  }
  return Dataset(schema, std::move(rows), std::move(labels));
}

Dataset LoadDataset(const std::filesystem::path& path, const Schema& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return ParseDataset(in, schema);
}

TrainTestSplit Split(const Dataset& dataset, double test_fraction,
                     std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw Error(ErrorCode::kUsage, "test fraction must lie in (0, 1)");
  }
  const std::size_t n = dataset.size();
  if (n < 2) throw Error(ErrorCode::kData, "need at least two rows to split");
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  internal::Rng rng(seed);
  rng.Shuffle(order);
  auto n_test = static_cast<std::size_t>(
      std::llround(test_fraction * static_cast<double>(n)));
  n_test = std::clamp<std::size_t>(n_test, 1, n - 1);
  std::vector<std::size_t> test(order.begin(), order.begin() + n_test);
  std::vector<std::size_t> train(order.begin() + n_test, order.end());
  return {dataset.Subset(train), dataset.Subset(test)};
}

ProtectedTuple ProtectedTupleOf(const Instance& instance,
                                const Schema& schema) {
  ProtectedTuple tuple;
  tuple.reserve(schema.num_protected());
  for (std::size_t index : schema.protected_indices()) {
    tuple.push_back(instance.values.at(index));
  }
  return tuple;
}

bool ProtectedDomains::Contains(const ProtectedTuple& tuple) const {
  return std::binary_search(joint_combos.begin(), joint_combos.end(), tuple);
}

std::size_t ProtectedDomains::CartesianSize() const {
  std::size_t size = per_attribute.empty() ? 0 : 1;
  for (const auto& [name, values] : per_attribute) size *= values.size();
  return size;
}

ProtectedDomains ComputeProtectedDomains(const Dataset& train) {
  if (train.empty()) {
    throw Error(ErrorCode::kData, "protected domains of an empty dataset");
  }
  const Schema& schema = train.schema();
  std::vector<std::set<std::string>> values(schema.num_protected());
  std::set<ProtectedTuple> combos;
  for (const Instance& row : train.rows()) {
    ProtectedTuple tuple = ProtectedTupleOf(row, schema);
    for (std::size_t p = 0; p < tuple.size(); ++p) values[p].insert(tuple[p]);
    combos.insert(std::move(tuple));
  }
  ProtectedDomains domains;
  for (std::size_t p = 0; p < values.size(); ++p) {
    const std::string& name = schema.protected_attributes()[p];
    if (values[p].size() < 2) {
      domains.warnings.push_back("protected attribute '" + name +
                                 "' has a single observed value; it cannot "
                                 "be mutated");
    }
    domains.per_attribute.emplace_back(
        name, std::vector<std::string>(values[p].begin(), values[p].end()));
  }
  domains.joint_combos.assign(combos.begin(), combos.end());
  return domains;
}

std::string SubgroupKey::ToString() const {
  std::string out;
  for (const auto& [attribute, value] : assignment) {
    if (!out.empty()) out += '|';
    out += attribute;
    out += '=';
    out += value;
  }
  return out;
}

std::vector<SubgroupKey> EnumerateSubgroups(const ProtectedDomains& domains) {
  std::vector<SubgroupKey> keys;
  keys.reserve(domains.joint_combos.size());
  for (const ProtectedTuple& combo : domains.joint_combos) {
    SubgroupKey key;
    for (std::size_t p = 0; p < combo.size(); ++p) {
      key.assignment.emplace_back(domains.per_attribute.at(p).first, combo[p]);
    }
    keys.push_back(std::move(key));
  }
  return keys;
}

EncodingMap::EncodingMap(std::vector<Block> blocks)
    : blocks_(std::move(blocks)) {
  for (const Block& block : blocks_) {
    dimension_ +=
        block.kind == AttributeKind::kCategorical ? block.levels.size() : 1;
  }
}

EncodingMap EncodingMap::Fit(const Dataset& train) {
  if (train.empty()) {
    throw Error(ErrorCode::kData, "cannot fit an encoding on no rows");
  }
  const Schema& schema = train.schema();
  std::vector<Block> blocks;
  for (std::size_t a = 0; a < schema.num_attributes(); ++a) {
    Block block;
    block.kind = schema.attributes()[a].kind;
    if (block.kind == AttributeKind::kCategorical) {
      std::set<std::string> levels;
      for (const Instance& row : train.rows()) levels.insert(row.values[a]);
      block.levels.assign(levels.begin(), levels.end());
    } else {
      block.min = ParseNumber(train.rows().front().values[a]);
      block.max = block.min;
      for (const Instance& row : train.rows()) {
        const double value = ParseNumber(row.values[a]);
        block.min = std::min(block.min, value);
        block.max = std::max(block.max, value);
      }
    }
    blocks.push_back(std::move(block));
  }
  return EncodingMap(std::move(blocks));
}

void EncodingMap::EncodeInto(const Instance& instance, double* out) const {
  if (instance.values.size() != blocks_.size()) {
    throw Error(ErrorCode::kShape, "instance has " +
                                       std::to_string(instance.values.size()) +
                                       " attributes, encoding expects " +
                                       std::to_string(blocks_.size()));
  }
  for (std::size_t a = 0; a < blocks_.size(); ++a) {
    const Block& block = blocks_[a];
    const std::string& cell = instance.values[a];
    if (block.kind == AttributeKind::kCategorical) {
      const auto it =
          std::lower_bound(block.levels.begin(), block.levels.end(), cell);
      for (std::size_t l = 0; l < block.levels.size(); ++l) out[l] = 0.0;
      if (it != block.levels.end() && *it == cell) {
        out[it - block.levels.begin()] = 1.0;
      }
      out += block.levels.size();
    } else {
      const double range = block.max - block.min;
      const double value = ParseNumber(cell);
      *out++ =
          range > 0.0 ? std::clamp((value - block.min) / range, 0.0, 1.0) : 0.0;
    }
  }
}

std::vector<double> EncodingMap::Encode(const Instance& instance) const {
  std::vector<double> out(dimension_);
  EncodeInto(instance, out.data());
  return out;
}

}  // namespace fairhome
