// Copyright 2026 The geoad-audit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "geoad/bias_profile.h"
#include "geoad/community.h"
#include "geoad/ingest.h"
#include "geoad/similarity_graph.h"

// Writers for plot- and GIS-ready outputs. Every writer is byte-deterministic:
// fixed row order and shortest round-trip number formatting.
namespace geoad {

// `source,target,weight`, one row per node pair i < j in node order.
void WriteEdgeList(std::ostream& out, const SimilarityGraph& graph);
// Inverse of WriteEdgeList. Nodes are recovered in order of first
// appearance. Throws ParseError on malformed rows or missing pairs.
SimilarityGraph ReadEdgeList(std::istream& in, std::string keyword);

// `lower,upper,count`.
void WriteHistogram(std::ostream& out, std::span<const HistogramBin> bins);

// `zipcode,community`.
void WritePartition(std::ostream& out, const SimilarityGraph& graph,
                    const Partition& partition);

// `community,zipcodes,population,white,black,asian` with absolute shares.
void WriteCommunityDemographics(
    std::ostream& out, std::span<const CommunityDemographics> communities);

enum class TableFormat { kCsv, kJson };

// Domain table with columns domain, theta, shortfall, absolute and relative
// shares, divergence ratios, and ternary coordinates; rows sorted by domain.
// Throws AuditError on an empty profile set.
void WriteDomainTable(std::ostream& out, std::span<const DomainProfile> profiles,
                      TableFormat format);

// `category,position,domain,share,shortfall`.
void WriteTopDomains(std::ostream& out, const TopDomains& top);

// Properties attached to choropleth features, keyed by zipcode.
struct ChoroplethOverlay {
  std::map<std::string, std::size_t> community;
  // zipcode -> domain -> 1-based position in that domain's top set.
  std::map<std::string, std::map<std::string, std::size_t>> ranks;
};

ChoroplethOverlay CommunityOverlay(const SimilarityGraph& graph,
                                   const Partition& partition);
ChoroplethOverlay ProfileOverlay(std::span<const DomainProfile> profiles);

struct ChoroplethDocument {
  nlohmann::ordered_json feature_collection;
  // Dataset zipcodes with no boundary feature, ascending.
  std::vector<std::string> missing_boundaries;
};

// Throws AuditError unless the input is a GeoJSON FeatureCollection.
nlohmann::ordered_json ReadBoundaries(std::istream& in);

// Keeps boundary features whose `ZCTA5` or `zipcode` property names a
// dataset zipcode, sorted by zipcode, with geometry copied verbatim and
// properties replaced by zipcode, population, absolute shares, and overlay
// values. Throws AuditError when a feature carries neither property.
ChoroplethDocument BuildChoropleth(const Dataset& dataset,
                                   const nlohmann::ordered_json& boundaries,
                                   const ChoroplethOverlay& overlay);

void WriteChoropleth(std::ostream& out, const ChoroplethDocument& document);
// Plain text, one missing zipcode per line.
void WriteMissingBoundaries(std::ostream& out,
                            const ChoroplethDocument& document);

}  // namespace geoad
