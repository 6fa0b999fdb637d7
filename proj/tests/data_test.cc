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

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "fairhome/error.h"
#include "test_util.h"

namespace fairhome {
namespace {

using testing::CodeOf;
using testing::MakeDataset;

Schema AdultSchema() {
  return Schema({{"age", AttributeKind::kNumeric},
                 {"race", AttributeKind::kCategorical},
                 {"sex", AttributeKind::kCategorical}},
                {"race", "sex"}, "income", ">50k");
}

Dataset FromCsv(const std::string& text, const Schema& schema) {
  std::istringstream in(text);
  return ParseDataset(in, schema);
}

TEST(SchemaTest, ParsesJson) {
  std::istringstream in(R"({
    "attributes": [{"name": "age", "kind": "numeric"},
                   {"name": "sex", "kind": "categorical"}],
    "protected": ["sex"],
    "label_column": "y",
    "favorable_value": "yes"})");
  const Schema schema = ParseSchema(in);
  EXPECT_EQ(schema.num_attributes(), 2u);
  EXPECT_EQ(schema.num_protected(), 1u);
  EXPECT_EQ(schema.protected_indices(), std::vector<std::size_t>{1});
  EXPECT_TRUE(schema.IsProtected(1));
  EXPECT_FALSE(schema.IsProtected(0));
  EXPECT_EQ(schema.IndexOf("age"), 0u);
  EXPECT_EQ(schema.favorable_value(), "yes");
}

TEST(SchemaTest, RejectsBrokenInvariants) {
  const std::vector<Attribute> attrs = {{"age", AttributeKind::kNumeric},
                                        {"sex", AttributeKind::kCategorical}};
  EXPECT_EQ(CodeOf([&] { Schema(attrs, {}, "y", "1"); }), ErrorCode::kSchema);
  EXPECT_EQ(CodeOf([&] { Schema(attrs, {"age"}, "y", "1"); }),
            ErrorCode::kSchema);
  EXPECT_EQ(CodeOf([&] { Schema(attrs, {"race"}, "y", "1"); }),
            ErrorCode::kSchema);
  EXPECT_EQ(CodeOf([&] { Schema(attrs, {"sex", "sex"}, "y", "1"); }),
            ErrorCode::kSchema);
  EXPECT_EQ(CodeOf([&] { Schema(attrs, {"sex"}, "age", "1"); }),
            ErrorCode::kSchema);
  EXPECT_EQ(CodeOf([&] { Schema(attrs, {"sex"}, "y", "1").IndexOf("zip"); }),
            ErrorCode::kSchema);
}

TEST(SchemaTest, RejectsUnknownKind) {
  std::istringstream in(R"({"attributes": [{"name": "a", "kind": "text"}],
    "protected": ["a"], "label_column": "y", "favorable_value": "1"})");
  EXPECT_EQ(CodeOf([&] { ParseSchema(in); }), ErrorCode::kSchema);
}

TEST(LoadDatasetTest, MapsFavorableLabel) {
  const Dataset data = FromCsv(
      "age,race,sex,income\n"
      "39,white,male,>50k\n"
      "50,black,female,<=50k\n"
      "38,white,female,<=50k\n"
      "53,black,male,>50k\n",
      AdultSchema());
  EXPECT_EQ(data.size(), 4u);
  EXPECT_EQ(data.labels(), (std::vector<int>{1, 0, 0, 1}));
  EXPECT_EQ(data.rows()[1].values,
            (std::vector<std::string>{"50", "black", "female"}));
}

TEST(LoadDatasetTest, MatchesColumnsByNameAndTrims) {
  const Dataset data = FromCsv(
      "sex,zip,income,age,race\r\n"
      " male ,123,>50k, 39,white\r\n",
      AdultSchema());
  EXPECT_EQ(data.rows()[0].values,
            (std::vector<std::string>{"39", "white", "male"}));
  EXPECT_EQ(data.labels(), std::vector<int>{1});
}

TEST(LoadDatasetTest, MissingProtectedColumnIsSchemaError) {
  EXPECT_EQ(
      CodeOf([] { FromCsv("age,sex,income\n39,male,>50k\n", AdultSchema()); }),
      ErrorCode::kSchema);
}

TEST(LoadDatasetTest, BadCellsAreDataErrors) {
  const Schema schema = AdultSchema();
  const std::string header = "age,race,sex,income\n";
  EXPECT_EQ(CodeOf([&] { FromCsv(header + "inf,white,male,>50k\n", schema); }),
            ErrorCode::kData);
  EXPECT_EQ(CodeOf([&] { FromCsv(header + "abc,white,male,>50k\n", schema); }),
            ErrorCode::kData);
  EXPECT_EQ(CodeOf([&] { FromCsv(header + "39,,male,>50k\n", schema); }),
            ErrorCode::kData);
  EXPECT_EQ(CodeOf([&] { FromCsv(header + "39,white,male\n", schema); }),
            ErrorCode::kData);
  // A third label value cannot be binarized.
  EXPECT_EQ(CodeOf([&] {
              FromCsv(header +
                          "39,white,male,>50k\n40,white,male,<=50k\n"
                          "41,white,male,unknown\n",
                      schema);
            }),
            ErrorCode::kData);
  // Two label values, neither of them favorable.
  EXPECT_EQ(CodeOf([&] {
              FromCsv(header + "39,white,male,a\n40,white,male,b\n", schema);
            }),
            ErrorCode::kData);
}

TEST(LoadDatasetTest, BundledGermanFixture) {
  const std::string dir = FAIRHOME_DATA_DIR;
  const Schema schema = LoadSchema(dir + "/german_synth.schema.json");
  const Dataset data = LoadDataset(dir + "/german_synth.csv", schema);
  EXPECT_EQ(data.size(), 1000u);
  EXPECT_EQ(schema.protected_attributes(),
            (std::vector<std::string>{"sex", "age"}));
  EXPECT_EQ(CodeOf([&] { LoadDataset(dir + "/missing.csv", schema); }),
            ErrorCode::kIo);
}

Dataset Numbered(std::size_t n) {
  const Schema schema = testing::ProtectedNumericSchema(1, 1);
  std::vector<std::vector<std::string>> rows;
  std::vector<int> labels;
  for (std::size_t i = 0; i < n; ++i) {
    rows.push_back({i % 2 ? "a" : "b", std::to_string(i)});
    labels.push_back(static_cast<int>(i % 3 == 0));
  }
  return MakeDataset(schema, rows, labels);
}

std::multiset<std::string> Ids(const Dataset& d) {
  std::multiset<std::string> ids;
  for (const auto& r : d.rows()) ids.insert(r.values[1]);
  return ids;
}

TEST(SplitTest, SizesAndDeterminism) {
  const Dataset data = Numbered(10);
  const auto a = Split(data, 0.3, 7);
  const auto b = Split(data, 0.3, 7);
  EXPECT_EQ(a.train.size(), 7u);
  EXPECT_EQ(a.test.size(), 3u);
  EXPECT_EQ(a.train.rows(), b.train.rows());
  EXPECT_EQ(a.test.rows(), b.test.rows());
  EXPECT_EQ(a.test.labels(), b.test.labels());
}

TEST(SplitTest, DifferentSeedsDiffer) {
  const Dataset data = Numbered(1000);
  EXPECT_NE(Split(data, 0.3, 7).test.rows(), Split(data, 0.3, 8).test.rows());
}

TEST(SplitTest, IsAPartition) {
  for (std::size_t n : {2u, 3u, 17u, 100u}) {
    const Dataset data = Numbered(n);
    for (double fraction : {0.01, 0.3, 0.5, 0.99}) {
      const auto split = Split(data, fraction, n);
      EXPECT_GE(split.test.size(), 1u);
      EXPECT_GE(split.train.size(), 1u);
      auto ids = Ids(split.train);
      const auto test_ids = Ids(split.test);
      for (const auto& id : test_ids) EXPECT_EQ(ids.count(id), 0u);
      ids.insert(test_ids.begin(), test_ids.end());
      EXPECT_EQ(ids, Ids(data));
      // Labels travel with their rows.
      for (std::size_t i = 0; i < split.test.size(); ++i) {
        const int id = std::stoi(split.test.rows()[i].values[1]);
        EXPECT_EQ(split.test.labels()[i], static_cast<int>(id % 3 == 0));
      }
    }
  }
}

TEST(SplitTest, RejectsBadFraction) {
  const Dataset data = Numbered(10);
  EXPECT_EQ(CodeOf([&] { Split(data, 0.0, 1); }), ErrorCode::kUsage);
  EXPECT_EQ(CodeOf([&] { Split(data, 1.0, 1); }), ErrorCode::kUsage);
}

TEST(SplitTest, RejectsSingleRow) {
  EXPECT_EQ(CodeOf([&] { Split(Numbered(1), 0.5, 1); }), ErrorCode::kData);
}

Dataset ProtectedOnly(std::size_t d,
                      const std::vector<std::vector<std::string>>& tuples) {
  const Schema schema = testing::ProtectedNumericSchema(d, 0);
  std::vector<int> labels(tuples.size(), 0);
  labels[0] = 1;
  return MakeDataset(schema, tuples, labels);
}

TEST(ProtectedDomainsTest, AllCombosObserved) {
  const auto domains = ComputeProtectedDomains(ProtectedOnly(
      2, {{"M", "W"}, {"F", "W"}, {"M", "NW"}, {"F", "NW"}, {"M", "W"}}));
  ASSERT_EQ(domains.per_attribute.size(), 2u);
  EXPECT_EQ(domains.per_attribute[0].second,
            (std::vector<std::string>{"F", "M"}));
  EXPECT_EQ(domains.per_attribute[1].second,
            (std::vector<std::string>{"NW", "W"}));
  EXPECT_EQ(domains.joint_combos.size(), 4u);
  EXPECT_EQ(domains.CartesianSize(), 4u);
  EXPECT_TRUE(domains.warnings.empty());
}

TEST(ProtectedDomainsTest, UnobservedCombo) {
  const auto domains = ComputeProtectedDomains(
      ProtectedOnly(2, {{"M", "W"}, {"F", "W"}, {"M", "NW"}}));
  EXPECT_EQ(domains.joint_combos.size(), 3u);
  EXPECT_EQ(domains.CartesianSize(), 4u);
  EXPECT_FALSE(domains.Contains({"F", "NW"}));
  EXPECT_TRUE(domains.Contains({"M", "NW"}));
}

TEST(ProtectedDomainsTest, CompasFixtureHasEightCombos) {
  const std::string dir = FAIRHOME_DATA_DIR;
  const Schema schema = LoadSchema(dir + "/compas_synth.schema.json");
  const auto domains =
      ComputeProtectedDomains(LoadDataset(dir + "/compas_synth.csv", schema));
  EXPECT_EQ(domains.joint_combos.size(), 8u);
  EXPECT_EQ(EnumerateSubgroups(domains).size(), 8u);
}

TEST(ProtectedDomainsTest, SingleValueWarns) {
  const auto domains =
      ComputeProtectedDomains(ProtectedOnly(2, {{"M", "W"}, {"F", "W"}}));
  ASSERT_EQ(domains.warnings.size(), 1u);
  EXPECT_NE(domains.warnings[0].find("p1"), std::string::npos);
}

TEST(ProtectedDomainsTest, MatchesReconstructionOnRandomData) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t d = 1 + rng() % 3;
    std::vector<std::vector<std::string>> tuples;
    const std::size_t n = 1 + rng() % 30;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<std::string> t;
      for (std::size_t k = 0; k < d; ++k) {
        t.push_back(std::string(1, static_cast<char>('a' + rng() % 3)));
      }
      tuples.push_back(t);
    }
    const auto domains = ComputeProtectedDomains(ProtectedOnly(d, tuples));
    for (std::size_t k = 0; k < d; ++k) {
      std::set<std::string> seen;
      for (const auto& t : tuples) seen.insert(t[k]);
      EXPECT_EQ(domains.per_attribute[k].second,
                std::vector<std::string>(seen.begin(), seen.end()));
    }
    const std::set<std::vector<std::string>> combos(tuples.begin(),
                                                    tuples.end());
    EXPECT_EQ(domains.joint_combos, std::vector<std::vector<std::string>>(
                                        combos.begin(), combos.end()));
    const auto subgroups = EnumerateSubgroups(domains);
    EXPECT_EQ(subgroups.size(), combos.size());
    EXPECT_LE(subgroups.size(), domains.CartesianSize());
    EXPECT_EQ(subgroups.size() == domains.CartesianSize(),
              combos.size() == domains.CartesianSize());
    EXPECT_TRUE(std::is_sorted(subgroups.begin(), subgroups.end()));
  }
}

TEST(EnumerateSubgroupsTest, Counts) {
  EXPECT_EQ(EnumerateSubgroups(
                ComputeProtectedDomains(ProtectedOnly(
                    2, {{"M", "W"}, {"F", "W"}, {"M", "NW"}, {"F", "NW"}})))
                .size(),
            4u);
  EXPECT_EQ(EnumerateSubgroups(ComputeProtectedDomains(
                                   ProtectedOnly(1, {{"a"}, {"b"}, {"c"}})))
                .size(),
            3u);
  std::vector<std::vector<std::string>> seven;
  for (int mask = 0; mask < 7; ++mask) {
    seven.push_back({std::to_string(mask & 1), std::to_string((mask >> 1) & 1),
                     std::to_string((mask >> 2) & 1)});
  }
  EXPECT_EQ(EnumerateSubgroups(ComputeProtectedDomains(ProtectedOnly(3, seven)))
                .size(),
            7u);
}

TEST(EnumerateSubgroupsTest, KeyText) {
  const auto subgroups = EnumerateSubgroups(
      ComputeProtectedDomains(ProtectedOnly(2, {{"M", "W"}, {"F", "NW"}})));
  ASSERT_EQ(subgroups.size(), 2u);
  EXPECT_EQ(subgroups[0].ToString(), "p0=F|p1=NW");
  EXPECT_EQ(subgroups[1].ToString(), "p0=M|p1=W");
}

class EncodingTest : public ::testing::Test {
 protected:
  EncodingTest()
      : schema_({{"color", AttributeKind::kCategorical},
                 {"size", AttributeKind::kNumeric},
                 {"sex", AttributeKind::kCategorical}},
                {"sex"}, "y", "1"),
        train_(MakeDataset(
            schema_,
            {{"red", "10", "m"}, {"blue", "30", "f"}, {"green", "20", "m"}},
            {1, 0, 1})),
        map_(EncodingMap::Fit(train_)) {}

  Schema schema_;
  Dataset train_;
  EncodingMap map_;
};

TEST_F(EncodingTest, Layout) {
  EXPECT_EQ(map_.dimension(), 3u + 1u + 2u);
  // Levels are sorted: blue, green, red.
  EXPECT_EQ(map_.Encode(Instance{{"blue", "30", "f"}}),
            (std::vector<double>{1, 0, 0, 1.0, 1, 0}));
  EXPECT_EQ(map_.Encode(Instance{{"red", "10", "m"}}),
            (std::vector<double>{0, 0, 1, 0.0, 0, 1}));
  EXPECT_EQ(map_.Encode(Instance{{"green", "15", "m"}})[3], 0.25);
}

TEST_F(EncodingTest, UnseenAndOutOfRange) {
  EXPECT_EQ(map_.Encode(Instance{{"purple", "99", "x"}}),
            (std::vector<double>{0, 0, 0, 1.0, 0, 0}));
  EXPECT_EQ(map_.Encode(Instance{{"red", "-5", "m"}})[3], 0.0);
}

TEST_F(EncodingTest, Errors) {
  EXPECT_EQ(CodeOf([&] { map_.Encode(Instance{{"red", "1"}}); }),
            ErrorCode::kShape);
  EXPECT_EQ(CodeOf([&] { map_.Encode(Instance{{"red", "big", "m"}}); }),
            ErrorCode::kData);
}

TEST_F(EncodingTest, InjectiveOnTrainingLevels) {
  std::set<std::vector<double>> seen;
  for (const auto& row : train_.rows()) {
    EXPECT_TRUE(seen.insert(map_.Encode(row)).second);
  }
}

TEST(EncodingMapTest, ConstantNumericEncodesToZero) {
  const Schema schema = testing::ProtectedNumericSchema(1, 1);
  const Dataset train = MakeDataset(schema, {{"a", "5"}, {"b", "5"}}, {0, 1});
  const auto map = EncodingMap::Fit(train);
  EXPECT_EQ(map.Encode(Instance{{"a", "5"}})[2], 0.0);
  EXPECT_EQ(map.Encode(Instance{{"a", "9"}})[2], 0.0);
}

TEST(NumberTest, RoundTrips) {
  for (double v : {0.0, -1.5, 0.1, 1e-300, 123456789.125, 2.0 / 3.0}) {
    EXPECT_EQ(ParseNumber(FormatNumber(v)), v);
  }
  EXPECT_EQ(ParseNumber(" +4 "), 4.0);
  EXPECT_EQ(CodeOf([] { ParseNumber("nan"); }), ErrorCode::kData);
  EXPECT_EQ(CodeOf([] { ParseNumber(""); }), ErrorCode::kData);
  EXPECT_EQ(CodeOf([] { ParseNumber("1x"); }), ErrorCode::kData);
}

}  // namespace
}  // namespace fairhome
