// Copyright 2026 The geoad-audit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace geoad {

// One observed ad placement: how visible `domain` was for `keyword` in
// `zipcode`, and how much traffic it was estimated to receive there.
struct AdRecord {
  std::string keyword;
  std::string zipcode;
  std::string domain;
  std::int64_t rank = 1;  // 1 = most visible
  double visibility = 0.0;
  double traffic = 0.0;  // estimated visits per month

  friend bool operator==(const AdRecord&, const AdRecord&) = default;
};

// Census counts for one zipcode. The five tracked categories may sum to less
// than `total`; the remainder covers other and redacted categories.
struct ZipDemographics {
  std::string zipcode;
  std::uint64_t total = 0;
  std::uint64_t white = 0;
  std::uint64_t black = 0;
  std::uint64_t asian = 0;
  std::uint64_t american_indian = 0;
  std::uint64_t pacific_islander = 0;

  std::uint64_t other() const {
    return total - (white + black + asian + american_indian + pacific_islander);
  }

  friend bool operator==(const ZipDemographics&,
                         const ZipDemographics&) = default;
};

inline constexpr std::string_view kAdRecordsHeader =
    "keyword,zipcode,domain,rank,visibility,traffic";
inline constexpr std::string_view kDemographicsHeader =
    "zipcode,total,white,black,asian,american_indian,pacific_islander";

// True for exactly five ASCII digits.
bool IsZipcode(std::string_view text);

// Parses the ad-records CSV. Row order is preserved. Throws ParseError on a
// malformed row (line + column), a duplicate (keyword, zipcode, domain), or
// an input without data rows.
std::vector<AdRecord> ParseAdRecords(std::istream& in);

// Parses the demographics CSV. Throws ParseError on malformed rows,
// duplicate zipcodes, category sums above the total, or an empty table.
std::vector<ZipDemographics> ParseDemographics(std::istream& in);

void WriteAdRecords(std::ostream& out, std::span<const AdRecord> records);
void WriteDemographics(std::ostream& out,
                       std::span<const ZipDemographics> demographics);

enum class ValidationMode { kStrict, kPermissive };

struct ValidationReport {
  // Zipcodes referenced by records that have no demographics row.
  std::vector<std::string> missing_demographics;
  // Demographics rows that no record refers to. Informational only.
  std::vector<std::string> unused_demographics;
  std::size_t dropped_records = 0;

  bool empty() const {
    return missing_demographics.empty() && unused_demographics.empty() &&
           dropped_records == 0;
  }
};

struct ValidatedDataset;
ValidatedDataset ValidateDataset(std::vector<AdRecord> records,
                                 std::vector<ZipDemographics> demographics,
                                 ValidationMode mode);

// Joined, validated, immutable view over both input tables. Records are held
// sorted by (keyword, zipcode, domain) and demographics by zipcode, so every
// derived result is independent of input row order.
class Dataset {
 public:
  std::span<const AdRecord> records() const { return records_; }
  std::span<const ZipDemographics> demographics() const {
    return demographics_;
  }
  // Distinct keywords, ascending.
  const std::vector<std::string>& keywords() const { return keywords_; }
  // Distinct zipcodes appearing in records, ascending.
  const std::vector<std::string>& zipcodes() const { return zipcodes_; }

  bool HasKeyword(std::string_view keyword) const;
  bool HasZipcode(std::string_view zipcode) const;

  // Records for one keyword, sorted by (zipcode, domain). Empty if unknown.
  std::span<const AdRecord> RecordsFor(std::string_view keyword) const;
  // Records for one (keyword, zipcode), sorted by domain.
  std::span<const AdRecord> RecordsFor(std::string_view keyword,
                                       std::string_view zipcode) const;
  // Distinct domains with at least one record for `keyword`, ascending.
  std::vector<std::string> DomainsFor(std::string_view keyword) const;

  // nullptr when the zipcode has no demographics row.
  const ZipDemographics* FindDemographics(std::string_view zipcode) const;
  // Throws AuditError when the zipcode has no demographics row.
  const ZipDemographics& DemographicsFor(std::string_view zipcode) const;

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  friend ValidatedDataset ValidateDataset(std::vector<AdRecord>,
                                          std::vector<ZipDemographics>,
                                          ValidationMode);
  Dataset() = default;

  std::vector<AdRecord> records_;
  std::vector<ZipDemographics> demographics_;
  std::vector<std::string> keywords_;
  std::vector<std::string> zipcodes_;
};

struct ValidatedDataset {
  Dataset dataset;
  ValidationReport report;
};

// Joins records with demographics. Strict mode throws ValidationError listing
// every uncovered zipcode; permissive mode drops their records and counts
// them in the report. Also rejects duplicate record triples and duplicate
// demographics zipcodes that did not come through the parsers.
ValidatedDataset ValidateDataset(std::vector<AdRecord> records,
                                 std::vector<ZipDemographics> demographics,
                                 ValidationMode mode);

}  // namespace geoad
