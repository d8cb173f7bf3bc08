// Copyright 2026 The geoad-audit Authors
// SPDX-License-Identifier: Apache-2.0

// Leiden community detection (local moving, refinement, aggregation) for the
// modularity quality function with a resolution parameter.

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <optional>
#include <random>
#include <utility>

#include "geoad/community.h"
#include "geoad/error.h"

namespace geoad {
namespace {

// Randomness of the refinement merge: candidates are drawn with probability
// proportional to exp(gain / kRefinementRandomness).
constexpr double kRefinementRandomness = 0.01;
constexpr double kMinOuterImprovement = 1e-12;
// A move must beat staying by this much, relative to the node degree.
constexpr double kMoveTolerance = 1e-12;

// Draws are derived from the raw engine output so that results do not depend
// on the standard library's distribution implementations.
class Random {
 public:
  explicit Random(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t Below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    std::uint64_t draw;
    do {
      draw = engine_();
    } while (draw < threshold);
    return draw % bound;
  }

  double Unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  void Shuffle(std::vector<std::size_t>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[Below(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

std::size_t CountLabels(const Assignment& labels) {
  std::size_t count = 0;
  for (std::size_t label : labels) count = std::max(count, label + 1);
  return count;
}

std::vector<std::size_t> ShuffledNodes(std::size_t n, Random& rng) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  rng.Shuffle(order);
  return order;
}

// Accumulates edge weight per label for one node at a time.
class LinkAccumulator {
 public:
  explicit LinkAccumulator(std::size_t labels) : weight_(labels, 0.0) {}

  void Add(std::size_t label, double w) {
    if (weight_[label] == 0.0) touched_.push_back(label);
    weight_[label] += w;
  }
  double operator[](std::size_t label) const { return weight_[label]; }
  const std::vector<std::size_t>& touched() const { return touched_; }

  void Clear() {
    for (std::size_t label : touched_) weight_[label] = 0.0;
    touched_.clear();
  }

 private:
  std::vector<double> weight_;
  std::vector<std::size_t> touched_;
};

// Queue-based local moving: greedily moves nodes to the neighbouring (or an
// empty) community with the largest modularity gain, revisiting neighbours
// of moved nodes. `membership` must use labels below the node count.
void MoveNodesFast(const WeightedGraph& graph, Assignment& membership,
                   double resolution, Random& rng) {
  const std::size_t n = graph.node_count();
  const double two_m = graph.total_weight();
  std::vector<double> total(n, 0.0);
  std::vector<std::size_t> size(n, 0);
  for (std::size_t v = 0; v < n; ++v) {
    total[membership[v]] += graph.degree(v);
    ++size[membership[v]];
  }
  std::vector<std::size_t> empty;
  for (std::size_t c = n; c-- > 0;) {
    if (size[c] == 0) empty.push_back(c);
  }

  const auto order = ShuffledNodes(n, rng);
  std::deque<std::size_t> queue(order.begin(), order.end());
  std::vector<char> queued(n, 1);
  LinkAccumulator links(n);

  while (!queue.empty()) {
    const std::size_t v = queue.front();
    queue.pop_front();
    queued[v] = 0;

    const std::size_t current = membership[v];
    const double k = graph.degree(v);
    for (const auto& [u, w] : graph.neighbors(v)) links.Add(membership[u], w);

    total[current] -= k;
    --size[current];

    std::size_t best = current;
    double best_gain = links[current] - resolution * k * total[current] / two_m;
    const double tolerance = kMoveTolerance * std::max(k, 1.0);
    for (std::size_t c : links.touched()) {
      if (c == current) continue;
      const double gain = links[c] - resolution * k * total[c] / two_m;
      if (gain > best_gain + tolerance) {
        best = c;
        best_gain = gain;
      }
    }
    bool took_empty = false;
    if (size[current] > 0 && 0.0 > best_gain + tolerance && !empty.empty()) {
      best = empty.back();
      took_empty = true;
    }

    total[best] += k;
    ++size[best];
    if (best != current) {
      if (took_empty) empty.pop_back();
      if (size[current] == 0) empty.push_back(current);
      membership[v] = best;
      for (const auto& [u, w] : graph.neighbors(v)) {
        if (!queued[u] && membership[u] != best) {
          queue.push_back(u);
          queued[u] = 1;
        }
      }
    }
    links.Clear();
  }
}

// Splits every community of `partition` into well-connected subcommunities
// by merging singletons, never across community boundaries.
Assignment RefinePartition(const WeightedGraph& graph,
                           const Assignment& partition, double resolution,
                           bool randomized, Random& rng) {
  const std::size_t n = graph.node_count();
  const double two_m = graph.total_weight();

  std::vector<double> community_total(CountLabels(partition), 0.0);
  for (std::size_t v = 0; v < n; ++v) {
    community_total[partition[v]] += graph.degree(v);
  }

  Assignment refined(n);
  std::iota(refined.begin(), refined.end(), 0);
  std::vector<double> total(n);
  std::vector<std::size_t> size(n, 1);
  // Weight from each refined cluster to the rest of its community.
  std::vector<double> external(n, 0.0);
  for (std::size_t v = 0; v < n; ++v) {
    total[v] = graph.degree(v);
    for (const auto& [u, w] : graph.neighbors(v)) {
      if (partition[u] == partition[v]) external[v] += w;
    }
  }

  LinkAccumulator links(n);
  std::vector<std::pair<std::size_t, double>> candidates;
  for (std::size_t v : ShuffledNodes(n, rng)) {
    if (size[refined[v]] != 1) continue;
    const std::size_t community = partition[v];
    const double k = graph.degree(v);
    const double rest = community_total[community] - k;
    if (external[v] < resolution * k * rest / two_m) continue;

    for (const auto& [u, w] : graph.neighbors(v)) {
      if (partition[u] == community) links.Add(refined[u], w);
    }

    const std::size_t own = refined[v];
    total[own] -= k;
    candidates.clear();
    double max_gain = 0.0;
    for (std::size_t cluster : links.touched()) {
      if (cluster == own) continue;
      const double outside = community_total[community] - total[cluster];
      const bool well_connected =
          external[cluster] >= resolution * total[cluster] * outside / two_m;
      const double gain = links[cluster] - resolution * k * total[cluster] / two_m;
      if (well_connected && gain >= 0.0) {
        candidates.emplace_back(cluster, gain);
        max_gain = std::max(max_gain, gain);
      }
    }

    std::size_t chosen = own;
    if (randomized) {
      // Staying put is a candidate with zero gain.
      double norm = std::exp(-max_gain / kRefinementRandomness);
      for (auto& [cluster, gain] : candidates) {
        gain = std::exp((gain - max_gain) / kRefinementRandomness);
        norm += gain;
      }
      double draw = rng.Unit() * norm - std::exp(-max_gain / kRefinementRandomness);
      for (const auto& [cluster, weight] : candidates) {
        if (draw < 0.0) break;
        chosen = cluster;
        draw -= weight;
      }
      if (draw >= 0.0 && !candidates.empty()) chosen = candidates.back().first;
    } else {
      double best_gain = 0.0;
      for (const auto& [cluster, gain] : candidates) {
        if (gain > best_gain) {
          best_gain = gain;
          chosen = cluster;
        }
      }
    }

    if (chosen != own) {
      external[chosen] += external[v] - 2.0 * links[chosen];
      total[chosen] += k;
      ++size[chosen];
      size[own] = 0;
      refined[v] = chosen;
    } else {
      total[own] += k;
    }
    links.Clear();
  }
  return refined;
}

// Collapses each refined cluster into one node. Returns the aggregated graph
// and the coarse partition expressed on its nodes.
std::pair<WeightedGraph, Assignment> Aggregate(const WeightedGraph& graph,
                                               const Assignment& refined,
                                               const Assignment& partition) {
  const std::size_t clusters = CountLabels(refined);
  std::vector<std::vector<std::size_t>> members(clusters);
  for (std::size_t v = 0; v < graph.node_count(); ++v) {
    members[refined[v]].push_back(v);
  }

  WeightedGraph aggregated(clusters);
  Assignment coarse(clusters);
  LinkAccumulator links(clusters);
  for (std::size_t a = 0; a < clusters; ++a) {
    coarse[a] = partition[members[a].front()];
    double internal = 0.0;
    for (std::size_t v : members[a]) {
      internal += graph.self_weight(v);
      for (const auto& [u, w] : graph.neighbors(v)) {
        const std::size_t b = refined[u];
        if (b == a) {
          internal += w;
        } else if (b > a) {
          links.Add(b, w);
        }
      }
    }
    if (internal > 0.0) aggregated.AddSelfWeight(a, internal);
    for (std::size_t b : links.touched()) aggregated.AddEdge(a, b, links[b]);
    links.Clear();
  }
  return {std::move(aggregated), CanonicalAssignment(coarse)};
}

// One full multilevel pass starting from `initial`.
Assignment LeidenPass(const WeightedGraph& graph, const Assignment& initial,
                      const LeidenOptions& options, Random& rng) {
  Assignment partition = CanonicalAssignment(initial);
  Assignment node_of(graph.node_count());
  std::iota(node_of.begin(), node_of.end(), 0);

  std::optional<WeightedGraph> owned;
  const WeightedGraph* current = &graph;
  while (true) {
    MoveNodesFast(*current, partition, options.resolution, rng);
    partition = CanonicalAssignment(partition);
    if (CountLabels(partition) == current->node_count()) break;

    Assignment refined = CanonicalAssignment(
        RefinePartition(*current, partition, options.resolution,
                        options.randomized_refinement, rng));
    if (CountLabels(refined) == current->node_count()) refined = partition;

    auto [aggregated, coarse] = Aggregate(*current, refined, partition);
    for (auto& node : node_of) node = refined[node];
    owned = std::move(aggregated);
    current = &*owned;
    partition = std::move(coarse);
  }

  Assignment flat(graph.node_count());
  for (std::size_t v = 0; v < flat.size(); ++v) flat[v] = partition[node_of[v]];
  return flat;
}

// Relabels so that every community is connected through stored edges.
// Splitting a disconnected community never lowers modularity.
Assignment SplitDisconnected(const WeightedGraph& graph,
                             const Assignment& labels) {
  const std::size_t n = graph.node_count();
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  Assignment split(n, kUnset);
  std::size_t next = 0;
  std::vector<std::size_t> stack;
  for (std::size_t start = 0; start < n; ++start) {
    if (split[start] != kUnset) continue;
    split[start] = next;
    stack.push_back(start);
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      for (const auto& [u, w] : graph.neighbors(v)) {
        if (split[u] == kUnset && labels[u] == labels[v]) {
          split[u] = next;
          stack.push_back(u);
        }
      }
    }
    ++next;
  }
  return split;
}

}  // namespace

Partition LeidenPartition(const WeightedGraph& graph,
                          const LeidenOptions& options) {
  if (options.max_iterations == 0) {
    throw AuditError("max_iterations must be at least 1");
  }
  if (!(options.resolution > 0.0)) {
    throw AuditError("resolution must be positive");
  }
  if (!(graph.total_weight() > 0.0)) {
    throw AuditError("graph has no positive edge weight");
  }

  Random rng(options.seed);
  Assignment current(graph.node_count());
  std::iota(current.begin(), current.end(), 0);
  double quality = Modularity(graph, current, options.resolution);

  Partition result;
  for (std::size_t iteration = 0; iteration < options.max_iterations;
       ++iteration) {
    Assignment next =
        SplitDisconnected(graph, LeidenPass(graph, current, options, rng));
    const double next_quality = Modularity(graph, next, options.resolution);
    if (next_quality < quality) break;
    const double improvement = next_quality - quality;
    current = std::move(next);
    quality = next_quality;
    result.quality_trace.push_back(quality);
    if (improvement < kMinOuterImprovement) break;
  }

  result.assignment = CanonicalAssignment(current);
  result.community_count = CountLabels(result.assignment);
  result.quality = quality;
  result.seed = options.seed;
  result.resolution = options.resolution;
  return result;
}

}  // namespace geoad
