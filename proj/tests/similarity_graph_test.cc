// Copyright 2026 The geoad-audit Authors
// SPDX-License-Identifier: Apache-2.0

#include "geoad/similarity_graph.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "geoad/error.h"
#include "testing/fixtures.h"
#include "testing/oracles.h"

namespace geoad {
namespace {

using ::testing::ElementsAre;
using ::testing::Pair;
using testing::Record;
using testing::Zip;

TrafficVector Vec(std::map<std::string, double> entries) {
  return TrafficVector("10001", entries);
}

std::vector<TrafficVector::Entry> Entries(const TrafficVector& vec) {
  return {vec.entries().begin(), vec.entries().end()};
}

Dataset ThreeZipDataset() {
  return testing::MakeDataset(
      {Record("k", "10001", "d1", 1, 3), Record("k", "10001", "d2", 1, 4),
       Record("k", "10002", "d1", 1, 1), Record("k", "10002", "d3", 1, 0),
       Record("other", "10003", "d1", 1, 9)},
      {Zip("10001", 10, 1, 1, 1), Zip("10002", 10, 1, 1, 1),
       Zip("10003", 10, 1, 1, 1)});
}

TEST(TrafficVectorTest, GroupsRecordsOfOneZipcode) {
  const auto dataset = ThreeZipDataset();
  const auto vec = BuildTrafficVector(dataset, "k", "10001");
  EXPECT_THAT(Entries(vec), ElementsAre(Pair("d1", 3.0), Pair("d2", 4.0)));
  EXPECT_EQ(vec.at("d2"), 4.0);
  EXPECT_EQ(vec.at("absent"), 0.0);
}

TEST(TrafficVectorTest, ZeroTrafficAndMissingZipcodesAreEmpty) {
  const auto dataset = ThreeZipDataset();
  EXPECT_THAT(Entries(BuildTrafficVector(dataset, "k", "10002")),
              ElementsAre(Pair("d1", 1.0)));
  EXPECT_TRUE(BuildTrafficVector(dataset, "k", "10003").empty());
}

TEST(TrafficVectorTest, UnknownKeywordOrZipcodeFails) {
  const auto dataset = ThreeZipDataset();
  EXPECT_THROW(BuildTrafficVector(dataset, "nope", "10001"), AuditError);
  EXPECT_THROW(BuildTrafficVector(dataset, "k", "99999"), AuditError);
  EXPECT_THROW(TrafficVector("10001", {{"d", -1.0}}), AuditError);
}

TEST(TrafficVectorTest, NormalizationDividesBySum) {
  const auto dataset = ThreeZipDataset();
  const auto vec = BuildTrafficVector(dataset, "k", "10001", /*normalize=*/true);
  EXPECT_THAT(Entries(vec), ElementsAre(Pair("d1", 3.0 / 7.0), Pair("d2", 4.0 / 7.0)));
}

TEST(ZipDistanceTest, HandComputedValues) {
  // 3^2 + 4^2
  EXPECT_EQ(ZipDistance(Vec({{"d1", 3}, {"d2", 4}}), Vec({})), 25.0);
  EXPECT_EQ(ZipDistance(Vec({{"d1", 3}, {"d2", 4}}), Vec({{"d1", 3}, {"d2", 4}})), 0.0);
  // (1-0)^2 + (0-1)^2
  EXPECT_EQ(ZipDistance(Vec({{"d1", 1}}), Vec({{"d2", 1}})), 2.0);
}

TEST(ZipSimilarityTest, InverseDistancePlusOne) {
  EXPECT_EQ(SimilarityFromDistance(0.0), 1.0);
  EXPECT_EQ(SimilarityFromDistance(25.0), 1.0 / 26.0);
  EXPECT_EQ(SimilarityFromDistance(1.0), 0.5);
  EXPECT_EQ(ZipSimilarity(Vec({{"d1", 3}, {"d2", 4}}), Vec({})), 1.0 / 26.0);
}

TEST(ZipSimilarityTest, PositiveDistanceNeverReachesOne) {
  EXPECT_LT(SimilarityFromDistance(1e-300), 1.0);
  EXPECT_LT(ZipSimilarity(Vec({{"d", 1.0}}), Vec({{"d", 1.0 + 1e-12}})), 1.0);
}

TEST(BuildGraphTest, UniformKeywordGivesUnitWeights) {
  std::vector<AdRecord> records;
  std::vector<ZipDemographics> demo;
  for (std::size_t z = 0; z < 12; ++z) {
    records.push_back(Record("covid-19", testing::ZipName(z), "cdc.gov", 1, 500));
    records.push_back(Record("covid-19", testing::ZipName(z), "ny.gov", 0.5, 90));
    demo.push_back(Zip(testing::ZipName(z), 10, 1, 1, 1));
  }
  const auto graph = BuildGraph(testing::MakeDataset(records, demo), "covid-19");
  EXPECT_EQ(graph.edge_count(), 12u * 11u / 2u);
  for (double w : graph.weights()) EXPECT_EQ(w, 1.0);
}

TEST(BuildGraphTest, ThreeDistinctZipcodesMatchPairwiseOracle) {
  const auto dataset = ThreeZipDataset();
  const auto graph = BuildGraph(dataset, "k");
  EXPECT_THAT(graph.nodes(), ElementsAre("10001", "10002", "10003"));
  ASSERT_EQ(graph.edge_count(), 3u);

  const std::vector<std::string> domains = {"d1", "d2", "d3"};
  const std::map<std::string, double> v1 = {{"d1", 3}, {"d2", 4}};
  const std::map<std::string, double> v2 = {{"d1", 1}};
  const std::map<std::string, double> v3 = {};
  using testing::DenseDistance;
  using testing::DenseSimilarity;
  EXPECT_EQ(graph.weight(0, 1), DenseSimilarity(DenseDistance(domains, v1, v2)));
  EXPECT_EQ(graph.weight(0, 2), DenseSimilarity(DenseDistance(domains, v1, v3)));
  EXPECT_EQ(graph.weight(1, 2), DenseSimilarity(DenseDistance(domains, v2, v3)));
  // (3-1)^2 + 4^2 = 20; 25; 1
  EXPECT_EQ(graph.weight(1, 0), 1.0 / 21.0);
  EXPECT_EQ(graph.weight(0, 2), 1.0 / 26.0);
  EXPECT_EQ(graph.weight(1, 2), 0.5);
}

TEST(BuildGraphTest, TwoZipcodesGiveOneEdge) {
  const auto dataset = testing::MakeDataset(
      {Record("k", "10001", "a", 1, 2), Record("k", "10002", "a", 1, 1)},
      {Zip("10001", 1, 0, 0, 0), Zip("10002", 1, 0, 0, 0)});
  const auto graph = BuildGraph(dataset, "k");
  EXPECT_EQ(graph.edge_count(), 1u);
  EXPECT_EQ(graph.weight(0, 1), 0.5);
}

TEST(BuildGraphTest, Errors) {
  const auto dataset = ThreeZipDataset();
  EXPECT_THROW(BuildGraph(dataset, "absent"), AuditError);
  const auto single = testing::MakeDataset({Record("k", "10001", "a", 1, 2)},
                                           {Zip("10001", 1, 0, 0, 0)});
  EXPECT_THROW(BuildGraph(single, "k"), AuditError);
}

TEST(SimilarityGraphTest, ConstructorValidates) {
  EXPECT_THROW(SimilarityGraph("k", {"a"}, {}), AuditError);
  EXPECT_THROW(SimilarityGraph("k", {"a", "a"}, {1.0}), AuditError);
  EXPECT_THROW(SimilarityGraph("k", {"a", "b"}, {1.0, 1.0}), AuditError);
  EXPECT_THROW(SimilarityGraph("k", {"a", "b"}, {0.0}), AuditError);
  EXPECT_THROW(SimilarityGraph("k", {"a", "b"}, {1.5}), AuditError);
}

TEST(SimilarityGraphTest, EdgeIndexIsRowMajorUpperTriangle) {
  const std::size_t n = 6;
  std::size_t expected = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      EXPECT_EQ(SimilarityGraph::EdgeIndex(i, j, n), expected);
      EXPECT_EQ(SimilarityGraph::EdgeIndex(j, i, n), expected);
      ++expected;
    }
  }
}

TEST(WeightHistogramTest, HandBinning) {
  const SimilarityGraph graph("k", {"a", "b", "c"}, {1.0, 0.5, 0.5});
  const auto bins = WeightHistogram(graph, 2);
  ASSERT_EQ(bins.size(), 2u);
  EXPECT_EQ(bins[0].lower, 0.0);
  EXPECT_EQ(bins[0].upper, 0.5);
  EXPECT_EQ(bins[0].count, 2u);
  EXPECT_EQ(bins[1].upper, 1.0);
  EXPECT_EQ(bins[1].count, 1u);
}

TEST(WeightHistogramTest, UniformGraphFillsOneBin) {
  const SimilarityGraph graph("k", {"a", "b", "c", "d"}, std::vector<double>(6, 1.0));
  for (std::size_t bins : {1u, 2u, 7u, 20u, 100u}) {
    const auto histogram = WeightHistogram(graph, bins);
    std::size_t populated = 0;
    for (const auto& bin : histogram) populated += bin.count > 0;
    EXPECT_EQ(populated, 1u);
    EXPECT_EQ(histogram.back().count, 6u);
  }
  EXPECT_THROW(WeightHistogram(graph, 0), AuditError);
}

TEST(WeightHistogramTest, RightInclusiveEdgesAndTotals) {
  std::mt19937_64 rng(3);
  std::vector<double> weights;
  for (int i = 0; i < 45; ++i) {
    weights.push_back(std::max(1e-9, static_cast<double>(rng() % 10 + 1) / 10.0));
  }
  std::vector<std::string> nodes;
  for (int i = 0; i < 10; ++i) nodes.push_back(testing::ZipName(i));
  const SimilarityGraph graph("k", nodes, weights);
  const auto histogram = WeightHistogram(graph, 10);
  std::size_t total = 0;
  for (std::size_t k = 0; k < histogram.size(); ++k) {
    total += histogram[k].count;
    // Weights are exactly k/10 for k = 1..10, so each lands in bin k-1.
    const auto expected = static_cast<std::size_t>(std::count_if(
        weights.begin(), weights.end(),
        [&](double w) { return w == static_cast<double>(k + 1) / 10.0; }));
    EXPECT_EQ(histogram[k].count, expected) << "bin " << k;
  }
  EXPECT_EQ(total, graph.edge_count());
}

// Random sparse vectors compared against the dense brute-force oracle.
TEST(SimilarityPropertyTest, SparseMatchesDenseAndIsSymmetric) {
  std::mt19937_64 rng(5);
  auto real = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53 * 100.0; };
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<std::string> domains;
    const std::size_t count = 1 + rng() % 10;
    for (std::size_t d = 0; d < count; ++d) domains.push_back("d" + std::to_string(d));
    std::sort(domains.begin(), domains.end());
    std::map<std::string, double> a, b;
    for (const auto& d : domains) {
      if (rng() % 3) a[d] = real();
      if (rng() % 3) b[d] = real();
    }
    const TrafficVector va("10001", a), vb("10002", b);
    const double dense = testing::DenseDistance(domains, a, b);
    ASSERT_EQ(ZipDistance(va, vb), dense);
    ASSERT_EQ(ZipDistance(vb, va), ZipDistance(va, vb));
    ASSERT_EQ(ZipSimilarity(va, vb), testing::DenseSimilarity(dense));
    ASSERT_GT(ZipSimilarity(va, vb), 0.0);
    ASSERT_LE(ZipSimilarity(va, vb), 1.0);

    // Pushing `a` further away from `b` never increases similarity.
    const double stretch = 1.1 + static_cast<double>(rng() % 200) / 100.0;
    std::map<std::string, double> far;
    for (const auto& d : domains) {
      const double xa = a.contains(d) ? a[d] : 0.0;
      const double xb = b.contains(d) ? b[d] : 0.0;
      const double moved = xb + stretch * (xa - xb);
      if (moved > 0.0) far[d] = moved;
      else if (moved < 0.0) goto skip;  // would leave the non-negative orthant
    }
    ASSERT_LE(ZipSimilarity(TrafficVector("10003", far), vb), ZipSimilarity(va, vb));
  skip:;
  }
}

TEST(BuildGraphPropertyTest, RowPermutationAndWorkerCountInvariant) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    auto tables = testing::RandomTables(rng, 10, 5);
    const auto reference =
        BuildGraph(testing::MakeDataset(tables.records, tables.demographics), "k");
    std::shuffle(tables.records.begin(), tables.records.end(), rng);
    const auto dataset = testing::MakeDataset(tables.records, tables.demographics);
    EXPECT_EQ(BuildGraph(dataset, "k"), reference);
    EXPECT_EQ(BuildGraph(dataset, "k", {false, 4}), reference);
  }
}

TEST(BuildGraphTest, ParallelBuildIsBitIdentical) {
  auto tables = testing::SyntheticCity(202, 40, 2, 1);
  const auto dataset = testing::MakeDataset(tables.records, tables.demographics);
  const auto keyword = dataset.keywords().front();
  const auto serial = BuildGraph(dataset, keyword, {false, 1});
  EXPECT_EQ(BuildGraph(dataset, keyword, {false, 8}), serial);
  EXPECT_EQ(serial.edge_count(), 202u * 201u / 2u);
}

}  // namespace
}  // namespace geoad
