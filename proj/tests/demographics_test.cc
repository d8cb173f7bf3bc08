// Copyright 2026 The geoad-audit Authors
// SPDX-License-Identifier: Apache-2.0

#include "geoad/demographics.h"

#include <random>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "geoad/error.h"
#include "testing/fixtures.h"

namespace geoad {
namespace {

using ::testing::DoubleNear;
using ::testing::HasSubstr;
using testing::Zip;

TEST(DemographicVectorTest, ProjectsTrackedCategories) {
  ZipDemographics zip{"10001", 10000, 4500, 1900, 1200, 100, 50};
  EXPECT_EQ(ToDemographicVector(zip), (DemographicVector{4500, 1900, 1200, 10000}));
  EXPECT_EQ(ToDemographicVector(Zip("10002", 0, 0, 0, 0)),
            (DemographicVector{0, 0, 0, 0}));
  EXPECT_EQ(ToDemographicVector(Zip("10003", 100, 100, 0, 0)),
            (DemographicVector{100, 0, 0, 100}));
}

TEST(RegionBaselineTest, CityAverageFixture) {
  const auto baseline = RegionBaseline(testing::CityBaselineFixture());
  EXPECT_EQ(baseline.mode, ShareMode::kAbsolute);
  EXPECT_NEAR(baseline.white, 0.45, 1e-12);
  EXPECT_NEAR(baseline.black, 0.19, 1e-12);
  EXPECT_NEAR(baseline.asian, 0.12, 1e-12);
}

TEST(RegionBaselineTest, SingleZipcodeIsHandDivision) {
  std::vector<ZipDemographics> one = {Zip("10001", 10000, 4500, 1900, 1200)};
  const auto baseline = RegionBaseline(one);
  EXPECT_EQ(baseline.white, 4500.0 / 10000.0);
  EXPECT_EQ(baseline.black, 1900.0 / 10000.0);
  EXPECT_EQ(baseline.asian, 1200.0 / 10000.0);
}

TEST(RegionBaselineTest, PopulationWeightedNotZipcodeWeighted) {
  // Per-zipcode averaging would give white 0.5; pooled counts give 0.9.
  std::vector<ZipDemographics> rows = {Zip("10001", 9000, 9000, 0, 0),
                                       Zip("10002", 1000, 0, 1000, 0)};
  EXPECT_EQ(RegionBaseline(rows).white, 0.9);
}

TEST(RegionBaselineTest, EmptyRegionFails) {
  std::vector<ZipDemographics> zero = {Zip("10001", 0, 0, 0, 0)};
  EXPECT_THAT([&] { RegionBaseline(zero); },
              ::testing::ThrowsMessage<AuditError>(HasSubstr("empty region")));
  EXPECT_THROW(RegionBaseline({}), AuditError);
}

TEST(RelativeSharesTest, RenormalizesOverTrackedCategories) {
  const auto relative = RelativeShares({0.45, 0.19, 0.12, ShareMode::kAbsolute});
  EXPECT_EQ(relative.mode, ShareMode::kRelative);
  // Hand oracle: divide by 0.76.
  EXPECT_NEAR(relative.white, 0.5921052631578947, 1e-15);
  EXPECT_NEAR(relative.black, 0.25, 1e-15);
  EXPECT_NEAR(relative.asian, 0.15789473684210525, 1e-15);

  const auto pure = RelativeShares({0.5, 0.0, 0.0, ShareMode::kAbsolute});
  EXPECT_EQ(pure.white, 1.0);
  EXPECT_EQ(pure.black, 0.0);

  const auto even = RelativeShares({0.2, 0.2, 0.2, ShareMode::kAbsolute});
  EXPECT_DOUBLE_EQ(even.white, 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(even.asian, 1.0 / 3.0);
}

TEST(RelativeSharesTest, ZeroTrackedPopulationFails) {
  EXPECT_THAT([] { RelativeShares({0, 0, 0, ShareMode::kAbsolute}); },
              ::testing::ThrowsMessage<AuditError>(HasSubstr("no tracked population")));
}

TEST(DemographicsPropertyTest, BaselineAndShareInvariants) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    auto rows = testing::RandomTables(rng, 10, 1).demographics;
    const auto baseline = RegionBaseline(rows);

    auto doubled = rows;
    for (auto row : rows) {
      row.zipcode[0] = '9';
      doubled.push_back(row);
    }
    // Duplicating every row leaves the pooled shares unchanged.
    EXPECT_EQ(RegionBaseline(doubled), baseline);

    EXPECT_LE(baseline.sum(), 1.0 + 1e-15);
    if (baseline.sum() == 0.0) continue;
    const auto relative = RelativeShares(baseline);
    EXPECT_NEAR(relative.sum(), 1.0, 1e-12);
    EXPECT_EQ(RelativeShares(relative), relative);
    EXPECT_LE(baseline.white, relative.white + 1e-15);
    EXPECT_LE(baseline.black, relative.black + 1e-15);
    EXPECT_LE(baseline.asian, relative.asian + 1e-15);
  }
}

}  // namespace
}  // namespace geoad
