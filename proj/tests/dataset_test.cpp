// Copyright 2026 The Fairlens Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fairlens/dataset.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "fairlens/error.hpp"
#include "fairlens/rng.hpp"
#include "gtest/gtest.h"

namespace fairlens {
namespace {

DatasetSchema TwoAttrSchema() {
  DatasetSchema schema;
  schema.attributes.push_back(AttributeSpec::range("gender", 0, 1, true));
  schema.attributes.push_back(AttributeSpec::range("hours", 0, 8, false));
  return schema;
}

TEST(AttributeSpecTest, RangeBuildsContiguousDomain) {
  AttributeSpec a = AttributeSpec::range("age", 0, 4, true);
  EXPECT_EQ(a.name, "age");
  EXPECT_TRUE(a.is_protected);
  EXPECT_EQ(a.domain, (std::vector<int>{0, 1, 2, 3, 4}));
  EXPECT_EQ(a.lo(), 0);
  EXPECT_EQ(a.hi(), 4);
  EXPECT_EQ(a.domain_size(), 5u);
  EXPECT_TRUE(a.contains(0));
  EXPECT_TRUE(a.contains(4));
  EXPECT_FALSE(a.contains(5));
  EXPECT_FALSE(a.contains(-1));
  EXPECT_EQ(a.index_of(3), 3);
  EXPECT_EQ(a.index_of(9), -1);
}

TEST(AttributeSpecTest, SparseDomainLookupsUseTheSortedList) {
  AttributeSpec a{"code", {2, 5, 9}, false, {}};
  EXPECT_TRUE(a.contains(5));
  EXPECT_FALSE(a.contains(4));
  EXPECT_EQ(a.index_of(9), 2);
  EXPECT_EQ(a.lo(), 2);
  EXPECT_EQ(a.hi(), 9);
}

TEST(SchemaValidateTest, AcceptsWellFormedSchema) {
  EXPECT_NO_THROW(TwoAttrSchema().validate());
}

TEST(SchemaValidateTest, RejectsDuplicateNames) {
  DatasetSchema s = TwoAttrSchema();
  s.attributes.push_back(AttributeSpec::range("gender", 0, 3, false));
  EXPECT_THROW(s.validate(), ConfigError);
}

TEST(SchemaValidateTest, RejectsEmptyDomain) {
  DatasetSchema s = TwoAttrSchema();
  s.attributes.push_back(AttributeSpec{"empty", {}, false, {}});
  EXPECT_THROW(s.validate(), ConfigError);
}

TEST(SchemaValidateTest, RejectsUnsortedDomain) {
  DatasetSchema s = TwoAttrSchema();
  s.attributes.push_back(AttributeSpec{"bad", {3, 1}, false, {}});
  EXPECT_THROW(s.validate(), ConfigError);
}

TEST(SchemaValidateTest, RejectsAllProtectedSchemas) {
  DatasetSchema s;
  s.attributes.push_back(AttributeSpec::range("a", 0, 1, true));
  s.attributes.push_back(AttributeSpec::range("b", 0, 1, true));
  EXPECT_THROW(s.validate(), ConfigError);
}

TEST(SchemaValidateTest, RejectsLabelCollidingWithAttribute) {
  DatasetSchema s = TwoAttrSchema();
  s.label_name = "hours";
  EXPECT_THROW(s.validate(), ConfigError);
}

TEST(SchemaValidateTest, RejectsDecreasingBinEdges) {
  DatasetSchema s = TwoAttrSchema();
  AttributeSpec binned = AttributeSpec::range("age", 0, 2, false);
  binned.bin_edges = {45.0, 25.0};
  s.attributes.push_back(binned);
  EXPECT_THROW(s.validate(), ConfigError);
}

TEST(SchemaValidateTest, BinnedAttributeDomainMustMatchEdgeCount) {
  DatasetSchema s = TwoAttrSchema();
  AttributeSpec binned = AttributeSpec::range("age", 0, 5, false);
  binned.bin_edges = {25.0, 45.0, 65.0};  // 3 edges -> domain must be 0..3
  s.attributes.push_back(binned);
  EXPECT_THROW(s.validate(), ConfigError);
  s.attributes.back() = AttributeSpec::range("age", 0, 3, false);
  s.attributes.back().bin_edges = {25.0, 45.0, 65.0};
  EXPECT_NO_THROW(s.validate());
}

TEST(SchemaTest, IndexAndProtectedLookups) {
  DatasetSchema s = TwoAttrSchema();
  EXPECT_EQ(s.attribute_index("gender"), 0);
  EXPECT_EQ(s.attribute_index("hours"), 1);
  EXPECT_EQ(s.attribute_index("nope"), -1);
  EXPECT_EQ(s.protected_indices(), (std::vector<int>{0}));
}

TEST(SchemaTest, InputDomainSizeMultipliesDomains) {
  DatasetSchema s;
  s.attributes.push_back(AttributeSpec::range("a", 0, 1, true));   // 2
  s.attributes.push_back(AttributeSpec::range("b", 0, 2, false));  // 3
  s.attributes.push_back(AttributeSpec::range("c", 0, 3, false));  // 4
  bool overflow = true;
  EXPECT_EQ(s.input_domain_size(&overflow), 24u);
  EXPECT_FALSE(overflow);
}

TEST(SchemaTest, InputDomainSizeSaturatesOnOverflow) {
  DatasetSchema s;
  s.attributes.push_back(AttributeSpec::range("p", 0, 1, true));
  for (int i = 0; i < 10; ++i)
    s.attributes.push_back(
        AttributeSpec::range("x" + std::to_string(i), 0, 99, false));
  bool overflow = false;
  EXPECT_EQ(s.input_domain_size(&overflow), UINT64_MAX);
  EXPECT_TRUE(overflow);
}

TEST(SchemaTest, FingerprintSeparatesSchemas) {
  DatasetSchema a = TwoAttrSchema();
  DatasetSchema b = TwoAttrSchema();
  EXPECT_EQ(a.fingerprint(), b.fingerprint());
  b.attributes[1].is_protected = true;  // only flag differs
  EXPECT_NE(a.fingerprint(), b.fingerprint());
  DatasetSchema c = TwoAttrSchema();
  c.attributes[1].domain.push_back(9);
  EXPECT_NE(a.fingerprint(), c.fingerprint());
}

TEST(InstanceTest, EqualityAndOrdering) {
  Instance a({1, 2, 3}), b({1, 2, 3}), c({1, 2, 4});
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
  EXPECT_LT(a, c);
  EXPECT_EQ(InstanceHash{}(a), InstanceHash{}(b));
}

TEST(DatasetValidateTest, CatchesDomainViolationsAndBadLabels) {
  Dataset ds;
  ds.schema = TwoAttrSchema();
  ds.rows = {Instance({0, 3}), Instance({1, 9})};  // 9 outside hours 0..8
  ds.labels = {0, 1};
  EXPECT_THROW(ds.validate(), DataError);
  ds.rows[1] = Instance({1, 8});
  EXPECT_NO_THROW(ds.validate());
  ds.labels[0] = 2;
  EXPECT_THROW(ds.validate(), DataError);
  ds.labels = {0};
  EXPECT_THROW(ds.validate(), DataError);
}

TEST(DatasetTest, FirstDomainViolationFindsTheOffendingAttribute) {
  DatasetSchema s = TwoAttrSchema();
  EXPECT_EQ(first_domain_violation(s, Instance({1, 4})), -1);
  EXPECT_EQ(first_domain_violation(s, Instance({2, 4})), 0);
  EXPECT_EQ(first_domain_violation(s, Instance({1, 9})), 1);
  EXPECT_EQ(first_domain_violation(s, Instance({1})), 0);  // wrong arity
}

TEST(ScalingTest, ScaledRowMapsDomainBoundsToUnitInterval) {
  DatasetSchema s = TwoAttrSchema();
  Eigen::VectorXd v = scaled_row(s, Instance({1, 4}));
  ASSERT_EQ(v.size(), 2);
  EXPECT_DOUBLE_EQ(v(0), 1.0);
  EXPECT_DOUBLE_EQ(v(1), 0.5);

  DatasetSchema single;
  single.attributes.push_back(AttributeSpec::range("p", 0, 1, true));
  single.attributes.push_back(AttributeSpec{"const", {7}, false, {}});
  Eigen::VectorXd w = scaled_row(single, Instance({0, 7}));
  EXPECT_DOUBLE_EQ(w(1), 0.0);  // degenerate span scales to zero
}

TEST(ScalingTest, ScaledRowsStacksInstancesAsMatrixRows) {
  DatasetSchema s = TwoAttrSchema();
  std::vector<Instance> rows = {Instance({0, 0}), Instance({1, 8})};
  Eigen::MatrixXd m = scaled_rows(s, rows);
  ASSERT_EQ(m.rows(), 2);
  ASSERT_EQ(m.cols(), 2);
  EXPECT_DOUBLE_EQ(m(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(m(1, 1), 1.0);

  Eigen::MatrixXd raw(2, 2);
  raw << 0, 0, 1, 8;
  Eigen::MatrixXd m2 = scale_matrix(s, raw);
  EXPECT_TRUE(m.isApprox(m2));
}

TEST(SplitTest, TenRowsFractionSixtyGivesSixAndFour) {
  Dataset ds;
  ds.schema = TwoAttrSchema();
  for (int i = 0; i < 10; ++i) {
    ds.rows.push_back(Instance({i % 2, i % 9}));
    ds.labels.push_back(i % 2);
  }
  auto [train, test] = split(ds, 0.6, 7);
  EXPECT_EQ(train.size(), 6u);
  EXPECT_EQ(test.size(), 4u);
}

TEST(SplitTest, SameSeedReproducesTheSamePartition) {
  Dataset ds;
  ds.schema = TwoAttrSchema();
  for (int i = 0; i < 50; ++i) {
    ds.rows.push_back(Instance({i % 2, i % 9}));
    ds.labels.push_back((i / 3) % 2);
  }
  auto [a_train, a_test] = split(ds, 0.4, 99);
  auto [b_train, b_test] = split(ds, 0.4, 99);
  EXPECT_EQ(a_train.rows, b_train.rows);
  EXPECT_EQ(a_test.rows, b_test.rows);
  EXPECT_EQ(a_train.labels, b_train.labels);
  auto [c_train, c_test] = split(ds, 0.4, 100);
  EXPECT_NE(a_train.rows, c_train.rows);  // different seed reshuffles
}

TEST(SplitTest, PartitionPreservesTheRowMultiset) {
  Dataset ds;
  ds.schema = TwoAttrSchema();
  Rng rng(3);
  for (int i = 0; i < 101; ++i) {
    ds.rows.push_back(Instance({static_cast<int>(rng.uniform_int(2)),
                                static_cast<int>(rng.uniform_int(9))}));
    ds.labels.push_back(static_cast<int>(rng.uniform_int(2)));
  }
  auto [train, test] = split(ds, 0.6, 5);
  EXPECT_EQ(train.size() + test.size(), ds.size());
  EXPECT_EQ(train.size(), 60u);  // floor(0.6 * 101)

  // Multiset equality over (row, label) pairs.
  std::multiset<std::pair<std::vector<int>, int>> original, recombined;
  for (size_t i = 0; i < ds.size(); ++i)
    original.insert({ds.rows[i].values, ds.labels[i]});
  for (size_t i = 0; i < train.size(); ++i)
    recombined.insert({train.rows[i].values, train.labels[i]});
  for (size_t i = 0; i < test.size(); ++i)
    recombined.insert({test.rows[i].values, test.labels[i]});
  EXPECT_EQ(original, recombined);
}

TEST(SplitTest, CensusScaleTrainCountUsesFloor) {
  Dataset ds;
  ds.schema = TwoAttrSchema();
  ds.rows.assign(32561, Instance({0, 0}));
  ds.labels.assign(32561, 0);
  auto [train, test] = split(ds, 0.6, 1);
  EXPECT_EQ(train.size(), 19536u);  // floor(0.6 * 32561)
  EXPECT_EQ(test.size(), 13025u);
}

TEST(SplitTest, RejectsDegenerateFractions) {
  Dataset ds;
  ds.schema = TwoAttrSchema();
  ds.rows = {Instance({0, 0})};
  ds.labels = {0};
  EXPECT_THROW(split(ds, 0.0, 1), ConfigError);
  EXPECT_THROW(split(ds, 1.0, 1), ConfigError);
  EXPECT_THROW(split(ds, -0.1, 1), ConfigError);
}

TEST(MutateProtectedTest, FlipsBinaryColumnsDeterministically) {
  Dataset ds;
  ds.schema = TwoAttrSchema();
  ds.rows = {Instance({0, 1}), Instance({1, 2}), Instance({1, 3}),
             Instance({0, 4})};
  ds.labels = {0, 1, 1, 0};
  Dataset mutated = mutate_protected(ds, 42);
  std::vector<int> gender;
  for (const auto& row : mutated.rows) gender.push_back(row.values[0]);
  EXPECT_EQ(gender, (std::vector<int>{1, 0, 0, 1}));
  for (size_t i = 0; i < ds.size(); ++i)
    EXPECT_EQ(mutated.rows[i].values[1], ds.rows[i].values[1]);
  EXPECT_EQ(mutated.labels, ds.labels);
}

TEST(MutateProtectedTest, EmptyDatasetStaysEmpty) {
  Dataset ds;
  ds.schema = TwoAttrSchema();
  Dataset mutated = mutate_protected(ds, 1);
  EXPECT_EQ(mutated.size(), 0u);
}

TEST(MutateProtectedTest, BinaryOnlyMutationIsAnInvolution) {
  Dataset ds;
  ds.schema = TwoAttrSchema();
  Rng rng(8);
  for (int i = 0; i < 200; ++i) {
    ds.rows.push_back(Instance({static_cast<int>(rng.uniform_int(2)),
                                static_cast<int>(rng.uniform_int(9))}));
    ds.labels.push_back(static_cast<int>(rng.uniform_int(2)));
  }
  Dataset twice = mutate_protected(mutate_protected(ds, 1), 2);
  EXPECT_EQ(twice.rows, ds.rows);
  EXPECT_EQ(twice.labels, ds.labels);
}

TEST(MutateProtectedTest, NonBinaryRedrawStaysInDomainAndTouchesNothingElse) {
  DatasetSchema schema;
  schema.attributes.push_back(AttributeSpec::range("age", 0, 9, true));
  schema.attributes.push_back(AttributeSpec::range("x", 0, 5, false));
  Dataset ds;
  ds.schema = schema;
  Rng rng(9);
  for (int i = 0; i < 500; ++i) {
    ds.rows.push_back(Instance({static_cast<int>(rng.uniform_int(10)),
                                static_cast<int>(rng.uniform_int(6))}));
    ds.labels.push_back(static_cast<int>(rng.uniform_int(2)));
  }
  Dataset mutated = mutate_protected(ds, 77);
  ASSERT_EQ(mutated.size(), ds.size());
  int changed = 0;
  for (size_t i = 0; i < ds.size(); ++i) {
    int v = mutated.rows[i].values[0];
    EXPECT_GE(v, 0);
    EXPECT_LE(v, 9);
    if (v != ds.rows[i].values[0]) ++changed;
    EXPECT_EQ(mutated.rows[i].values[1], ds.rows[i].values[1]);
  }
  EXPECT_EQ(mutated.labels, ds.labels);
  // A uniform redraw changes the value for about 9 in 10 rows.
  EXPECT_GT(changed, 350);
}

TEST(MutateProtectedTest, RequiresAProtectedAttribute) {
  DatasetSchema schema;
  schema.attributes.push_back(AttributeSpec::range("x", 0, 5, false));
  Dataset ds;
  ds.schema = schema;
  ds.rows = {Instance({1})};
  ds.labels = {0};
  EXPECT_THROW(mutate_protected(ds, 1), ConfigError);
}

}  // namespace
}  // namespace fairlens
