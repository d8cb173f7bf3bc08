// Copyright 2026 The geoad-audit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "geoad/ingest.h"
#include "geoad/similarity_graph.h"

namespace geoad::testing {

AdRecord Record(std::string keyword, std::string zipcode, std::string domain,
                double visibility, double traffic, std::int64_t rank = 1);

ZipDemographics Zip(std::string zipcode, std::uint64_t total,
                    std::uint64_t white, std::uint64_t black,
                    std::uint64_t asian);

// "10000" + index, zero padded to five digits.
std::string ZipName(std::size_t index);

// Strict validation; the fixture must be consistent.
Dataset MakeDataset(std::vector<AdRecord> records,
                    std::vector<ZipDemographics> demographics);

// Two zipcodes whose summed counts give white 0.45, black 0.19, asian 0.12.
std::vector<ZipDemographics> CityBaselineFixture();

struct RawTables {
  std::vector<AdRecord> records;
  std::vector<ZipDemographics> demographics;
};

// Small random instance: 2..max_zipcodes zipcodes, 1..max_domains domains,
// one keyword, traffic and visibility in [0, 100] with occasional exact
// zeros and visibility ties. Every zipcode has a demographics row with
// positive population.
RawTables RandomTables(std::mt19937_64& rng, std::size_t max_zipcodes = 10,
                       std::size_t max_domains = 5);

// A city-scale synthetic market: every domain bids in a random subset of
// zipcodes per keyword; keyword 0 is uniform (identical records everywhere).
RawTables SyntheticCity(std::size_t zipcodes, std::size_t domains,
                        std::size_t keywords, std::uint64_t seed);

std::vector<std::string> SyntheticKeywords(std::size_t keywords);

void WriteTables(const RawTables& tables, const std::filesystem::path& ads,
                 const std::filesystem::path& demographics);

// Complete graph with `blocks` blocks of `block_size` nodes; intra-block
// weight `intra`, inter-block weight `inter`. Node i belongs to block
// i / block_size.
SimilarityGraph PlantedGraph(std::size_t blocks, std::size_t block_size,
                             double intra, double inter);

// Fresh empty directory under the system temp dir.
std::filesystem::path TempDir(const std::string& name);

std::string ReadFile(const std::filesystem::path& path);

// FeatureCollection text with one unit-square polygon per zipcode, keyed by
// the ZCTA5 property.
std::string BoundaryGeoJson(const std::vector<std::string>& zipcodes);

}  // namespace geoad::testing
