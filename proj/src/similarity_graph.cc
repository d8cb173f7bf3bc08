// Copyright 2026 The geoad-audit Authors
// SPDX-License-Identifier: Apache-2.0

#include "geoad/similarity_graph.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <thread>

#include "geoad/error.h"

namespace geoad {

TrafficVector::TrafficVector(std::string zipcode,
                             const std::map<std::string, double>& traffic)
    : zipcode_(std::move(zipcode)) {
  for (const auto& [domain, value] : traffic) {
    if (!std::isfinite(value) || value < 0.0) {
      throw AuditError("traffic for " + domain + " in " + zipcode_ +
                       " must be finite and non-negative");
    }
    if (value > 0.0) entries_.emplace_back(domain, value);
  }
}

double TrafficVector::at(std::string_view domain) const {
  auto it = std::partition_point(
      entries_.begin(), entries_.end(),
      [&](const Entry& e) { return e.first < domain; });
  return it != entries_.end() && it->first == domain ? it->second : 0.0;
}

TrafficVector BuildTrafficVector(const Dataset& dataset,
                                 std::string_view keyword,
                                 std::string_view zipcode, bool normalize) {
  if (!dataset.HasKeyword(keyword)) {
    throw AuditError("unknown keyword '" + std::string(keyword) + "'");
  }
  if (!dataset.HasZipcode(zipcode)) {
    throw AuditError("unknown zipcode '" + std::string(zipcode) + "'");
  }
  std::map<std::string, double> traffic;
  double sum = 0.0;
  for (const auto& record : dataset.RecordsFor(keyword, zipcode)) {
    if (record.traffic > 0.0) {
      traffic.emplace(record.domain, record.traffic);
      sum += record.traffic;
    }
  }
  if (normalize && sum > 0.0) {
    for (auto& [domain, value] : traffic) value /= sum;
  }
  return TrafficVector(std::string(zipcode), traffic);
}

double ZipDistance(const TrafficVector& a, const TrafficVector& b) {
  auto ea = a.entries();
  auto eb = b.entries();
  long double sum = 0.0L;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < ea.size() || j < eb.size()) {
    long double diff;
    if (j == eb.size() || (i < ea.size() && ea[i].first < eb[j].first)) {
      diff = ea[i++].second;
    } else if (i == ea.size() || eb[j].first < ea[i].first) {
      diff = -static_cast<long double>(eb[j++].second);
    } else {
      diff = static_cast<long double>(ea[i++].second) -
             static_cast<long double>(eb[j++].second);
    }
    sum += diff * diff;
  }
  return static_cast<double>(sum);
}

double SimilarityFromDistance(double distance) {
  const double similarity = 1.0 / (distance + 1.0);
  if (distance > 0.0 && similarity >= 1.0) return std::nextafter(1.0, 0.0);
  return similarity;
}

double ZipSimilarity(const TrafficVector& a, const TrafficVector& b) {
  return SimilarityFromDistance(ZipDistance(a, b));
}

SimilarityGraph::SimilarityGraph(std::string keyword,
                                 std::vector<std::string> nodes,
                                 std::vector<double> weights)
    : keyword_(std::move(keyword)),
      nodes_(std::move(nodes)),
      weights_(std::move(weights)) {
  const std::size_t n = nodes_.size();
  if (n < 2) throw AuditError("a similarity graph needs at least 2 nodes");
  if (std::set<std::string>(nodes_.begin(), nodes_.end()).size() != n) {
    throw AuditError("similarity graph nodes must be unique");
  }
  if (weights_.size() != n * (n - 1) / 2) {
    throw AuditError("expected " + std::to_string(n * (n - 1) / 2) +
                     " edge weights, got " + std::to_string(weights_.size()));
  }
  for (double w : weights_) {
    if (!(w > 0.0 && w <= 1.0)) {
      throw AuditError("edge weight must lie in (0, 1]");
    }
  }
}

SimilarityGraph BuildGraph(const Dataset& dataset, std::string_view keyword,
                           const GraphOptions& options) {
  if (!dataset.HasKeyword(keyword)) {
    throw AuditError("unknown keyword '" + std::string(keyword) + "'");
  }
  const auto& zipcodes = dataset.zipcodes();
  const std::size_t n = zipcodes.size();
  if (n < 2) {
    throw AuditError("keyword '" + std::string(keyword) +
                     "' needs at least 2 zipcodes to build a graph");
  }

  std::vector<TrafficVector> vectors;
  vectors.reserve(n);
  for (const auto& zip : zipcodes) {
    vectors.push_back(
        BuildTrafficVector(dataset, keyword, zip, options.normalize_traffic));
  }

  std::vector<double> weights(n * (n - 1) / 2);
  auto fill_rows = [&](std::size_t worker, std::size_t workers) {
    for (std::size_t i = worker; i < n; i += workers) {
      for (std::size_t j = i + 1; j < n; ++j) {
        weights[SimilarityGraph::EdgeIndex(i, j, n)] =
            ZipSimilarity(vectors[i], vectors[j]);
      }
    }
  };
  const std::size_t workers =
      std::clamp<std::size_t>(options.jobs, 1, std::max<std::size_t>(n / 8, 1));
  if (workers == 1) {
    fill_rows(0, 1);
  } else {
    std::vector<std::jthread> threads;
    for (std::size_t w = 0; w < workers; ++w) {
      threads.emplace_back(fill_rows, w, workers);
    }
  }
  return SimilarityGraph(std::string(keyword), zipcodes, std::move(weights));
}

std::vector<HistogramBin> WeightHistogram(const SimilarityGraph& graph,
                                          std::size_t bins) {
  if (bins == 0) throw AuditError("histogram needs at least one bin");
  std::vector<HistogramBin> histogram(bins);
  const double width = static_cast<double>(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    histogram[k].lower = static_cast<double>(k) / width;
    histogram[k].upper = static_cast<double>(k + 1) / width;
  }
  for (double w : graph.weights()) {
    auto k = static_cast<std::size_t>(
        std::clamp(std::ceil(w * width) - 1.0, 0.0, width - 1.0));
    // Nudge across bin edges where w * bins rounded the wrong way.
    while (k + 1 < bins && w > histogram[k].upper) ++k;
    while (k > 0 && w <= histogram[k].lower) --k;
    ++histogram[k].count;
  }
  return histogram;
}

}  // namespace geoad
