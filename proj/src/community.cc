// Copyright 2026 The geoad-audit Authors
// SPDX-License-Identifier: Apache-2.0

#include "geoad/community.h"

#include <unordered_map>

#include "geoad/error.h"

namespace geoad {

WeightedGraph::WeightedGraph(std::size_t node_count)
    : adjacency_(node_count),
      self_weight_(node_count, 0.0),
      degree_(node_count, 0.0) {}

WeightedGraph WeightedGraph::FromSimilarityGraph(const SimilarityGraph& graph) {
  const std::size_t n = graph.node_count();
  WeightedGraph result(n);
  for (std::size_t i = 0; i < n; ++i) {
    result.adjacency_[i].reserve(n - 1);
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      result.AddEdge(i, j, graph.weight(i, j));
    }
  }
  return result;
}

void WeightedGraph::AddEdge(std::size_t u, std::size_t v, double weight) {
  if (u >= node_count() || v >= node_count() || u == v) {
    throw AuditError("invalid edge endpoints");
  }
  if (!(weight >= 0.0)) throw AuditError("edge weight must be non-negative");
  if (weight == 0.0) return;
  adjacency_[u].push_back({v, weight});
  adjacency_[v].push_back({u, weight});
  degree_[u] += weight;
  degree_[v] += weight;
  total_weight_ += 2.0 * weight;
}

void WeightedGraph::AddSelfWeight(std::size_t u, double weight) {
  if (u >= node_count()) throw AuditError("invalid node");
  if (!(weight >= 0.0)) throw AuditError("self weight must be non-negative");
  self_weight_[u] += weight;
  degree_[u] += weight;
  total_weight_ += weight;
}

std::vector<std::vector<std::size_t>> Partition::Communities() const {
  std::vector<std::vector<std::size_t>> communities(community_count);
  for (std::size_t node = 0; node < assignment.size(); ++node) {
    communities[assignment[node]].push_back(node);
  }
  return communities;
}

Assignment CanonicalAssignment(std::span<const std::size_t> labels) {
  std::unordered_map<std::size_t, std::size_t> renumber;
  Assignment canonical(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto [it, inserted] = renumber.try_emplace(labels[i], renumber.size());
    canonical[i] = it->second;
  }
  return canonical;
}

double Modularity(const WeightedGraph& graph,
                  std::span<const std::size_t> assignment, double resolution) {
  if (assignment.size() != graph.node_count()) {
    throw AuditError("assignment must cover every node");
  }
  if (!(resolution > 0.0)) throw AuditError("resolution must be positive");
  const double two_m = graph.total_weight();
  if (!(two_m > 0.0)) throw AuditError("modularity needs positive edge weight");

  const Assignment labels = CanonicalAssignment(assignment);
  std::size_t communities = 0;
  for (std::size_t label : labels) communities = std::max(communities, label + 1);

  std::vector<double> internal(communities, 0.0);
  std::vector<double> degree(communities, 0.0);
  for (std::size_t u = 0; u < graph.node_count(); ++u) {
    const std::size_t c = labels[u];
    degree[c] += graph.degree(u);
    internal[c] += graph.self_weight(u);
    for (const auto& [v, w] : graph.neighbors(u)) {
      if (labels[v] == c) internal[c] += w;
    }
  }
  double quality = 0.0;
  for (std::size_t c = 0; c < communities; ++c) {
    quality += internal[c] - resolution * degree[c] * degree[c] / two_m;
  }
  return quality / two_m;
}

double Modularity(const SimilarityGraph& graph,
                  std::span<const std::size_t> assignment, double resolution) {
  return Modularity(WeightedGraph::FromSimilarityGraph(graph), assignment,
                    resolution);
}

Partition LeidenPartition(const SimilarityGraph& graph,
                          const LeidenOptions& options) {
  return LeidenPartition(WeightedGraph::FromSimilarityGraph(graph), options);
}

std::vector<CommunityDemographics> ClusterDemographics(
    const SimilarityGraph& graph, const Partition& partition,
    const Dataset& dataset) {
  if (partition.assignment.size() != graph.node_count()) {
    throw AuditError("partition does not match graph");
  }
  std::vector<CommunityDemographics> result(partition.community_count);
  for (std::size_t c = 0; c < result.size(); ++c) result[c].community = c;
  for (std::size_t node = 0; node < graph.node_count(); ++node) {
    auto& entry = result.at(partition.assignment[node]);
    entry.counts +=
        ToDemographicVector(dataset.DemographicsFor(graph.nodes()[node]));
    ++entry.zipcode_count;
  }
  for (auto& entry : result) {
    if (entry.counts.total == 0) {
      throw AuditError("community " + std::to_string(entry.community) +
                       " has zero population");
    }
    entry.shares = AbsoluteShares(entry.counts, "empty community");
  }
  return result;
}

}  // namespace geoad
