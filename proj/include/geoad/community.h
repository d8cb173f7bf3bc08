// Copyright 2026 The geoad-audit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "geoad/demographics.h"
#include "geoad/ingest.h"
#include "geoad/similarity_graph.h"

namespace geoad {

// Undirected weighted graph in adjacency-list form. Also carries per-node
// self weight so that aggregated graphs keep the weight internal to a
// collapsed community.
class WeightedGraph {
 public:
  struct Neighbor {
    std::size_t node;
    double weight;
  };

  explicit WeightedGraph(std::size_t node_count);

  static WeightedGraph FromSimilarityGraph(const SimilarityGraph& graph);

  // Adds an edge u-v with weight w > 0, u != v. Zero weights are ignored.
  void AddEdge(std::size_t u, std::size_t v, double weight);
  // Adds to the diagonal entry A_uu as used by modularity (so an aggregated
  // community contributes twice its internal edge weight).
  void AddSelfWeight(std::size_t u, double weight);

  std::size_t node_count() const { return adjacency_.size(); }
  std::span<const Neighbor> neighbors(std::size_t u) const {
    return adjacency_[u];
  }
  double self_weight(std::size_t u) const { return self_weight_[u]; }
  // Weighted degree k_u including the self weight.
  double degree(std::size_t u) const { return degree_[u]; }
  // 2m: the sum of all degrees.
  double total_weight() const { return total_weight_; }

 private:
  std::vector<std::vector<Neighbor>> adjacency_;
  std::vector<double> self_weight_;
  std::vector<double> degree_;
  double total_weight_ = 0.0;
};

using Assignment = std::vector<std::size_t>;

struct Partition {
  // Community id per node, contiguous 0..k-1, numbered by first occurrence
  // in node order.
  Assignment assignment;
  std::size_t community_count = 0;
  double quality = 0.0;  // modularity of `assignment`
  std::uint64_t seed = 0;
  double resolution = 1.0;
  // Modularity after each accepted outer iteration.
  std::vector<double> quality_trace;

  // Node indices per community, each ascending.
  std::vector<std::vector<std::size_t>> Communities() const;
};

// Q = 1/(2m) * sum_ij [A_ij - resolution * k_i k_j / (2m)] * [c_i == c_j].
// Throws AuditError on a size mismatch, non-positive resolution, or an
// edgeless graph.
double Modularity(const WeightedGraph& graph, std::span<const std::size_t> assignment,
                  double resolution = 1.0);
double Modularity(const SimilarityGraph& graph,
                  std::span<const std::size_t> assignment,
                  double resolution = 1.0);

struct LeidenOptions {
  double resolution = 1.0;
  std::uint64_t seed = 42;
  std::size_t max_iterations = 100;
  // When false, refinement merges each node into its best well-connected
  // subcommunity instead of sampling one.
  bool randomized_refinement = true;
};

// Leiden community detection maximizing modularity. Each outer iteration
// runs local moving, refinement, and aggregation until no aggregation is
// possible, starting from the previous iteration's partition; iterations
// stop once the modularity gain drops below 1e-12. Every returned community
// is connected through positive-weight edges. Deterministic for a given
// (graph, options).
Partition LeidenPartition(const WeightedGraph& graph, const LeidenOptions& options = {});
Partition LeidenPartition(const SimilarityGraph& graph,
                          const LeidenOptions& options = {});

// Renumbers labels contiguously by first occurrence.
Assignment CanonicalAssignment(std::span<const std::size_t> labels);

struct CommunityDemographics {
  std::size_t community = 0;
  std::size_t zipcode_count = 0;
  DemographicVector counts;
  ShareVector shares;  // absolute
};

// Population-weighted shares per community. Throws AuditError when a node
// lacks demographics or a community has zero population.
std::vector<CommunityDemographics> ClusterDemographics(
    const SimilarityGraph& graph, const Partition& partition,
    const Dataset& dataset);

}  // namespace geoad
