// Copyright 2026 The geoad-audit Authors
// SPDX-License-Identifier: Apache-2.0

#include "geoad/export_report.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <unordered_map>

#include "geoad/csv.h"
#include "geoad/error.h"

namespace geoad {
namespace {

using nlohmann::ordered_json;
using csv::FormatReal;

std::vector<const DomainProfile*> SortedByDomain(
    std::span<const DomainProfile> profiles) {
  std::vector<const DomainProfile*> sorted;
  for (const auto& profile : profiles) sorted.push_back(&profile);
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const DomainProfile* a, const DomainProfile* b) {
                     return a->domain < b->domain;
                   });
  return sorted;
}

constexpr const char* kDomainColumns[] = {
    "domain",    "theta",     "shortfall", "white_abs", "black_abs",
    "asian_abs", "white_rel", "black_rel", "asian_rel", "white_div",
    "black_div", "asian_div", "ternary_x", "ternary_y"};

std::vector<double> DomainNumbers(const DomainProfile& p) {
  return {p.profile_absolute.white, p.profile_absolute.black,
          p.profile_absolute.asian, p.profile_relative.white,
          p.profile_relative.black, p.profile_relative.asian,
          p.divergence.white,       p.divergence.black,
          p.divergence.asian,       p.ternary.x,
          p.ternary.y};
}

std::string ZipcodeProperty(const ordered_json& feature, std::size_t index) {
  const auto properties = feature.find("properties");
  if (properties != feature.end() && properties->is_object()) {
    for (const char* key : {"ZCTA5", "zipcode"}) {
      auto value = properties->find(key);
      if (value == properties->end()) continue;
      if (value->is_string()) return value->get<std::string>();
      if (value->is_number_unsigned() || value->is_number_integer()) {
        char padded[32];
        std::snprintf(padded, sizeof padded, "%05lld",
                      static_cast<long long>(value->get<std::int64_t>()));
        return padded;
      }
    }
  }
  throw AuditError("boundary feature " + std::to_string(index) +
                   " has no ZCTA5 or zipcode property");
}

}  // namespace

void WriteEdgeList(std::ostream& out, const SimilarityGraph& graph) {
  out << "source,target,weight\n";
  const auto& nodes = graph.nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t j = i + 1; j < nodes.size(); ++j) {
      out << csv::EscapeField(nodes[i]) << ',' << csv::EscapeField(nodes[j])
          << ',' << FormatReal(graph.weight(i, j)) << '\n';
    }
  }
}

SimilarityGraph ReadEdgeList(std::istream& in, std::string keyword) {
  csv::LineReader reader(in);
  std::string line;
  if (!reader.Next(line) || line != "source,target,weight") {
    throw ParseError(1, "", "expected header `source,target,weight`");
  }
  std::vector<std::string> nodes;
  std::unordered_map<std::string, std::size_t> index;
  struct Row {
    std::size_t source, target;
    double weight;
    std::size_t line;
  };
  std::vector<Row> rows;
  auto node_index = [&](const std::string& name) {
    auto [it, inserted] = index.try_emplace(name, nodes.size());
    if (inserted) nodes.push_back(name);
    return it->second;
  };
  while (reader.Next(line)) {
    if (line.empty()) continue;
    auto fields = csv::SplitLine(line);
    if (!fields || fields->size() != 3) {
      throw ParseError(reader.line_number(), "", "expected 3 fields");
    }
    auto weight = csv::ParseReal((*fields)[2]);
    if (!weight) {
      throw ParseError(reader.line_number(), "weight", "invalid weight");
    }
    const std::size_t source = node_index((*fields)[0]);
    const std::size_t target = node_index((*fields)[1]);
    if (source == target) {
      throw ParseError(reader.line_number(), "target", "self edge");
    }
    rows.push_back({source, target, *weight, reader.line_number()});
  }
  const std::size_t n = nodes.size();
  if (n < 2 || rows.size() != n * (n - 1) / 2) {
    throw ParseError(reader.line_number(), "",
                     "edge list does not describe a complete graph");
  }
  std::vector<double> weights(rows.size(), 0.0);
  std::vector<char> filled(rows.size(), 0);
  for (const auto& row : rows) {
    const auto k = SimilarityGraph::EdgeIndex(row.source, row.target, n);
    if (filled[k]) throw ParseError(row.line, "", "duplicate node pair");
    filled[k] = 1;
    weights[k] = row.weight;
  }
  return SimilarityGraph(std::move(keyword), std::move(nodes),
                         std::move(weights));
}

void WriteHistogram(std::ostream& out, std::span<const HistogramBin> bins) {
  out << "lower,upper,count\n";
  for (const auto& bin : bins) {
    out << FormatReal(bin.lower) << ',' << FormatReal(bin.upper) << ','
        << bin.count << '\n';
  }
}

void WritePartition(std::ostream& out, const SimilarityGraph& graph,
                    const Partition& partition) {
  if (partition.assignment.size() != graph.node_count()) {
    throw AuditError("partition does not match graph");
  }
  out << "zipcode,community\n";
  for (std::size_t i = 0; i < graph.node_count(); ++i) {
    out << csv::EscapeField(graph.nodes()[i]) << ',' << partition.assignment[i]
        << '\n';
  }
}

void WriteCommunityDemographics(
    std::ostream& out, std::span<const CommunityDemographics> communities) {
  out << "community,zipcodes,population,white,black,asian\n";
  for (const auto& c : communities) {
    out << c.community << ',' << c.zipcode_count << ',' << c.counts.total << ','
        << FormatReal(c.shares.white) << ',' << FormatReal(c.shares.black)
        << ',' << FormatReal(c.shares.asian) << '\n';
  }
}

void WriteDomainTable(std::ostream& out,
                      std::span<const DomainProfile> profiles,
                      TableFormat format) {
  if (profiles.empty()) throw AuditError("no domain profiles to write");
  const auto sorted = SortedByDomain(profiles);
  constexpr std::size_t kNumericOffset = 3;

  if (format == TableFormat::kJson) {
    ordered_json table = ordered_json::array();
    for (const auto* p : sorted) {
      ordered_json row;
      row[kDomainColumns[0]] = p->domain;
      row[kDomainColumns[1]] = p->theta;
      row[kDomainColumns[2]] = p->shortfall;
      const auto numbers = DomainNumbers(*p);
      for (std::size_t i = 0; i < numbers.size(); ++i) {
        row[kDomainColumns[kNumericOffset + i]] = numbers[i];
      }
      table.push_back(std::move(row));
    }
    out << table.dump(2) << '\n';
    return;
  }

  for (std::size_t i = 0; i < std::size(kDomainColumns); ++i) {
    out << (i ? "," : "") << kDomainColumns[i];
  }
  out << '\n';
  for (const auto* p : sorted) {
    out << csv::EscapeField(p->domain) << ',' << p->theta << ','
        << (p->shortfall ? "true" : "false");
    for (double value : DomainNumbers(*p)) out << ',' << FormatReal(value);
    out << '\n';
  }
}

void WriteTopDomains(std::ostream& out, const TopDomains& top) {
  out << "category,position,domain,share,shortfall\n";
  auto write = [&](const char* category,
                   const std::vector<CategoryEntry>& entries) {
    for (std::size_t i = 0; i < entries.size(); ++i) {
      out << category << ',' << i + 1 << ','
          << csv::EscapeField(entries[i].domain) << ','
          << FormatReal(entries[i].share) << ','
          << (entries[i].shortfall ? "true" : "false") << '\n';
    }
  };
  write("white", top.white);
  write("black", top.black);
  write("asian", top.asian);
}

ChoroplethOverlay CommunityOverlay(const SimilarityGraph& graph,
                                   const Partition& partition) {
  if (partition.assignment.size() != graph.node_count()) {
    throw AuditError("partition does not match graph");
  }
  ChoroplethOverlay overlay;
  for (std::size_t i = 0; i < graph.node_count(); ++i) {
    overlay.community[graph.nodes()[i]] = partition.assignment[i];
  }
  return overlay;
}

ChoroplethOverlay ProfileOverlay(std::span<const DomainProfile> profiles) {
  ChoroplethOverlay overlay;
  for (const auto& profile : profiles) {
    for (std::size_t i = 0; i < profile.top_zipcodes.size(); ++i) {
      overlay.ranks[profile.top_zipcodes[i].zipcode][profile.domain] = i + 1;
    }
  }
  return overlay;
}

ordered_json ReadBoundaries(std::istream& in) {
  ordered_json document;
  try {
    document = ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw AuditError(std::string("invalid boundary GeoJSON: ") + e.what());
  }
  if (!document.is_object() || document.value("type", "") != "FeatureCollection" ||
      !document.contains("features") || !document["features"].is_array()) {
    throw AuditError("boundary GeoJSON must be a FeatureCollection");
  }
  return document;
}

ChoroplethDocument BuildChoropleth(const Dataset& dataset,
                                   const ordered_json& boundaries,
                                   const ChoroplethOverlay& overlay) {
  if (!boundaries.is_object() || !boundaries.contains("features") ||
      !boundaries["features"].is_array()) {
    throw AuditError("boundary GeoJSON must be a FeatureCollection");
  }
  const auto& features = boundaries["features"];
  std::vector<std::pair<std::string, const ordered_json*>> kept;
  for (std::size_t i = 0; i < features.size(); ++i) {
    std::string zipcode = ZipcodeProperty(features[i], i);
    if (dataset.HasZipcode(zipcode)) kept.emplace_back(std::move(zipcode), &features[i]);
  }
  std::stable_sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    return a.first < b.first;
  });

  ChoroplethDocument document;
  ordered_json& collection = document.feature_collection;
  collection["type"] = "FeatureCollection";
  if (boundaries.contains("crs")) collection["crs"] = boundaries["crs"];
  collection["features"] = ordered_json::array();

  for (const auto& [zipcode, source] : kept) {
    ordered_json properties;
    properties["zipcode"] = zipcode;
    const auto& demographics = dataset.DemographicsFor(zipcode);
    properties["population"] = demographics.total;
    if (demographics.total > 0) {
      const auto shares =
          AbsoluteShares(ToDemographicVector(demographics), "empty zipcode");
      properties["white"] = shares.white;
      properties["black"] = shares.black;
      properties["asian"] = shares.asian;
    } else {
      properties["white"] = nullptr;
      properties["black"] = nullptr;
      properties["asian"] = nullptr;
    }
    if (auto it = overlay.community.find(zipcode); it != overlay.community.end()) {
      properties["community"] = it->second;
    }
    if (auto it = overlay.ranks.find(zipcode); it != overlay.ranks.end()) {
      ordered_json ranks = ordered_json::object();
      for (const auto& [domain, rank] : it->second) ranks[domain] = rank;
      properties["rank"] = std::move(ranks);
    }

    ordered_json feature;
    feature["type"] = "Feature";
    if (source->contains("id")) feature["id"] = (*source)["id"];
    feature["properties"] = std::move(properties);
    feature["geometry"] =
        source->contains("geometry") ? (*source)["geometry"] : ordered_json();
    collection["features"].push_back(std::move(feature));
  }

  for (const auto& zipcode : dataset.zipcodes()) {
    const bool covered = std::any_of(kept.begin(), kept.end(), [&](const auto& k) {
      return k.first == zipcode;
    });
    if (!covered) document.missing_boundaries.push_back(zipcode);
  }
  return document;
}

void WriteChoropleth(std::ostream& out, const ChoroplethDocument& document) {
  out << document.feature_collection.dump() << '\n';
}

void WriteMissingBoundaries(std::ostream& out,
                            const ChoroplethDocument& document) {
  for (const auto& zipcode : document.missing_boundaries) out << zipcode << '\n';
}

}  // namespace geoad
