// Copyright 2026 The geoad-audit Authors
// SPDX-License-Identifier: Apache-2.0

#include "testing/fixtures.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace geoad::testing {

AdRecord Record(std::string keyword, std::string zipcode, std::string domain,
                double visibility, double traffic, std::int64_t rank) {
  return {std::move(keyword), std::move(zipcode), std::move(domain), rank,
          visibility, traffic};
}

ZipDemographics Zip(std::string zipcode, std::uint64_t total,
                    std::uint64_t white, std::uint64_t black,
                    std::uint64_t asian) {
  return {std::move(zipcode), total, white, black, asian, 0, 0};
}

std::string ZipName(std::size_t index) {
  char name[16];
  std::snprintf(name, sizeof name, "%05zu", 10000 + index);
  return name;
}

Dataset MakeDataset(std::vector<AdRecord> records,
                    std::vector<ZipDemographics> demographics) {
  return ValidateDataset(std::move(records), std::move(demographics),
                         ValidationMode::kStrict)
      .dataset;
}

std::vector<ZipDemographics> CityBaselineFixture() {
  return {Zip("10001", 6000, 3000, 1000, 600),
          Zip("10002", 4000, 1500, 900, 600)};
}

RawTables RandomTables(std::mt19937_64& rng, std::size_t max_zipcodes,
                       std::size_t max_domains) {
  auto below = [&](std::size_t n) {
    return static_cast<std::size_t>(rng() % n);
  };
  auto real = [&](double hi) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53 * hi;
  };
  const std::size_t zipcodes = 2 + below(max_zipcodes - 1);
  const std::size_t domains = 1 + below(max_domains);

  RawTables tables;
  for (std::size_t z = 0; z < zipcodes; ++z) {
    const std::uint64_t total = 1 + rng() % 50000;
    std::uint64_t left = total;
    auto take = [&] {
      const std::uint64_t v = left == 0 ? 0 : rng() % (left + 1);
      left -= v;
      return v;
    };
    const std::uint64_t white = take();
    const std::uint64_t black = take();
    const std::uint64_t asian = take();
    tables.demographics.push_back(Zip(ZipName(z * 7), total, white, black, asian));
  }
  for (std::size_t z = 0; z < zipcodes; ++z) {
    for (std::size_t d = 0; d < domains; ++d) {
      if (below(3) == 0) continue;  // domain absent here
      double visibility = below(4) == 0 ? 50.0 : real(100.0);
      double traffic = below(5) == 0 ? 0.0 : real(100.0);
      tables.records.push_back(Record("k", ZipName(z * 7),
                                      "d" + std::to_string(d) + ".com",
                                      visibility, traffic,
                                      1 + static_cast<std::int64_t>(below(100))));
    }
  }
  // Every zipcode must appear in records so the dataset covers it.
  for (std::size_t z = 0; z < zipcodes; ++z) {
    const auto zip = ZipName(z * 7);
    bool present = false;
    for (const auto& r : tables.records) present = present || r.zipcode == zip;
    if (!present) {
      tables.records.push_back(Record("k", zip, "d0.com", real(100.0),
                                      real(100.0)));
    }
  }
  return tables;
}

std::vector<std::string> SyntheticKeywords(std::size_t keywords) {
  std::vector<std::string> names = {"covid-19", "black lives matter",
                                    "houses for rent near me",
                                    "college scholarships",
                                    "online degree programs"};
  for (std::size_t k = names.size(); k < keywords; ++k) {
    names.push_back("keyword " + std::to_string(k));
  }
  names.resize(keywords);
  return names;
}

RawTables SyntheticCity(std::size_t zipcodes, std::size_t domains,
                        std::size_t keywords, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto real = [&](double hi) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53 * hi;
  };
  RawTables tables;
  // Three neighbourhood types with distinct demographic mixes.
  for (std::size_t z = 0; z < zipcodes; ++z) {
    const std::uint64_t total = 5000 + rng() % 60000;
    const std::size_t type = z % 3;
    const double white = type == 0 ? 0.7 : 0.2;
    const double black = type == 1 ? 0.55 : 0.1;
    const double asian = type == 2 ? 0.45 : 0.08;
    tables.demographics.push_back(
        Zip(ZipName(z), total, static_cast<std::uint64_t>(total * white),
            static_cast<std::uint64_t>(total * black),
            static_cast<std::uint64_t>(total * asian)));
  }
  const auto names = SyntheticKeywords(keywords);
  for (std::size_t k = 0; k < keywords; ++k) {
    for (std::size_t z = 0; z < zipcodes; ++z) {
      for (std::size_t d = 0; d < domains; ++d) {
        const std::string domain = "domain" + std::to_string(d) + ".org";
        if (k == 0) {
          if (d >= 3) continue;
          tables.records.push_back(Record(names[k], ZipName(z), domain,
                                          1.0 / static_cast<double>(d + 1),
                                          100.0 * static_cast<double>(d + 1),
                                          static_cast<std::int64_t>(d + 1)));
          continue;
        }
        // Domains prefer one neighbourhood type.
        const bool preferred = d % 3 == z % 3;
        if (real(1.0) > (preferred ? 0.9 : 0.3)) continue;
        const double visibility = real(preferred ? 1.0 : 0.4);
        const double traffic = std::floor(real(preferred ? 500.0 : 60.0));
        tables.records.push_back(
            Record(names[k], ZipName(z), domain, visibility, traffic,
                   1 + static_cast<std::int64_t>(rng() % 100)));
      }
    }
  }
  return tables;
}

void WriteTables(const RawTables& tables, const std::filesystem::path& ads,
                 const std::filesystem::path& demographics) {
  std::ofstream a(ads, std::ios::binary);
  WriteAdRecords(a, tables.records);
  std::ofstream d(demographics, std::ios::binary);
  WriteDemographics(d, tables.demographics);
}

SimilarityGraph PlantedGraph(std::size_t blocks, std::size_t block_size,
                             double intra, double inter) {
  const std::size_t n = blocks * block_size;
  std::vector<std::string> nodes;
  for (std::size_t i = 0; i < n; ++i) nodes.push_back(ZipName(i));
  std::vector<double> weights;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      weights.push_back(i / block_size == j / block_size ? intra : inter);
    }
  }
  return SimilarityGraph("planted", std::move(nodes), std::move(weights));
}

std::filesystem::path TempDir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("geoad_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string BoundaryGeoJson(const std::vector<std::string>& zipcodes) {
  std::ostringstream out;
  out << R"({"type":"FeatureCollection","features":[)";
  for (std::size_t i = 0; i < zipcodes.size(); ++i) {
    const auto x = static_cast<double>(i);
    if (i > 0) out << ',';
    out << R"({"type":"Feature","id":")" << zipcodes[i]
        << R"(","properties":{"ZCTA5":")" << zipcodes[i]
        << R"("},"geometry":{"type":"Polygon","coordinates":[[)"
        << '[' << x << ",0],[" << x + 1 << ",0],[" << x + 1 << ",1],[" << x
        << ",1],[" << x << ",0]]]}}";
  }
  out << "]}";
  return out.str();
}

}  // namespace geoad::testing
