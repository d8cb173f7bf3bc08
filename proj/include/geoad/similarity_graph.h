// Copyright 2026 The geoad-audit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "geoad/ingest.h"

namespace geoad {

// Sparse domain -> traffic map for one zipcode under one keyword. Only
// strictly positive traffic is stored; absent domains read as zero.
class TrafficVector {
 public:
  using Entry = std::pair<std::string, double>;

  TrafficVector() = default;
  // Drops zero entries. Throws AuditError on negative or non-finite traffic.
  TrafficVector(std::string zipcode, const std::map<std::string, double>& traffic);

  const std::string& zipcode() const { return zipcode_; }
  // Sorted by domain.
  std::span<const Entry> entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  double at(std::string_view domain) const;

  friend bool operator==(const TrafficVector&, const TrafficVector&) = default;

 private:
  std::string zipcode_;
  std::vector<Entry> entries_;
};

// Traffic of every domain bidding on `keyword` in `zipcode`. With
// `normalize`, entries are divided by their sum (L1) so that only the
// relative mix of domains matters. Throws AuditError for an unknown keyword
// or zipcode.
TrafficVector BuildTrafficVector(const Dataset& dataset, std::string_view keyword,
                                 std::string_view zipcode,
                                 bool normalize = false);

// Sum of squared traffic differences over the union of both domain sets.
// Accumulated in long double in ascending domain order.
double ZipDistance(const TrafficVector& a, const TrafficVector& b);

// 1 / (distance + 1). A strictly positive distance never maps to exactly 1:
// when the division rounds up to 1 the next double below 1 is returned, so
// weight 1 always means identical traffic vectors.
double SimilarityFromDistance(double distance);

double ZipSimilarity(const TrafficVector& a, const TrafficVector& b);

// Weighted complete graph over zipcodes. Edge weights live in a flat
// upper-triangular array indexed by node position.
class SimilarityGraph {
 public:
  // `weights` holds w(i, j) for i < j in row-major order. Throws AuditError
  // on duplicate node names, fewer than two nodes, a size mismatch, or a
  // weight outside (0, 1].
  SimilarityGraph(std::string keyword, std::vector<std::string> nodes,
                  std::vector<double> weights);

  const std::string& keyword() const { return keyword_; }
  const std::vector<std::string>& nodes() const { return nodes_; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return weights_.size(); }
  std::span<const double> weights() const { return weights_; }

  // Symmetric; `i != j`.
  double weight(std::size_t i, std::size_t j) const {
    return weights_[EdgeIndex(i, j, nodes_.size())];
  }

  static std::size_t EdgeIndex(std::size_t i, std::size_t j, std::size_t n) {
    if (i > j) std::swap(i, j);
    return i * n - i * (i + 1) / 2 + (j - i - 1);
  }

  friend bool operator==(const SimilarityGraph&,
                         const SimilarityGraph&) = default;

 private:
  std::string keyword_;
  std::vector<std::string> nodes_;
  std::vector<double> weights_;
};

struct GraphOptions {
  bool normalize_traffic = false;
  // Worker threads for edge computation. Output is bit-identical for any
  // value since every edge is computed independently.
  unsigned jobs = 1;
};

// One node per dataset zipcode in ascending order, including zipcodes with
// no records for `keyword`. Throws AuditError for an unknown keyword or
// fewer than two zipcodes.
SimilarityGraph BuildGraph(const Dataset& dataset, std::string_view keyword,
                           const GraphOptions& options = {});

struct HistogramBin {
  double lower = 0.0;
  double upper = 0.0;
  std::size_t count = 0;
};

// `bins` equal-width bins over [0, 1]; each bin is (lower, upper] except the
// first, which also includes 0. Counts sum to the edge count.
std::vector<HistogramBin> WeightHistogram(const SimilarityGraph& graph,
                                          std::size_t bins);

}  // namespace geoad
