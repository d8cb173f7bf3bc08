// Copyright 2026 The geoad-audit Authors
// SPDX-License-Identifier: Apache-2.0

#include "geoad/ingest.h"

#include <algorithm>
#include <array>
#include <set>
#include <tuple>

#include "geoad/csv.h"
#include "geoad/error.h"

namespace geoad {
namespace {

constexpr std::array<std::string_view, 6> kAdColumns = {
    "keyword", "zipcode", "domain", "rank", "visibility", "traffic"};
constexpr std::array<std::string_view, 7> kDemographicColumns = {
    "zipcode", "total",           "white",           "black",
    "asian",   "american_indian", "pacific_islander"};

template <std::size_t N>
void ExpectHeader(csv::LineReader& reader,
                  const std::array<std::string_view, N>& columns,
                  const char* empty_message) {
  std::string line;
  if (!reader.Next(line)) throw ParseError(0, "", empty_message);
  auto fields = csv::SplitLine(line);
  bool matches = fields && fields->size() == N;
  for (std::size_t i = 0; matches && i < N; ++i) {
    matches = (*fields)[i] == columns[i];
  }
  if (!matches) {
    std::string expected;
    for (std::size_t i = 0; i < N; ++i) {
      if (i) expected += ',';
      expected += columns[i];
    }
    throw ParseError(1, "", "expected header `" + expected + "`");
  }
}

// Next non-blank data row, split into exactly `width` fields.
bool NextRow(csv::LineReader& reader, std::size_t width,
             std::vector<std::string>& fields) {
  std::string line;
  while (reader.Next(line)) {
    if (line.empty()) continue;
    auto split = csv::SplitLine(line);
    if (!split) {
      throw ParseError(reader.line_number(), "", "malformed quoting");
    }
    if (split->size() != width) {
      throw ParseError(reader.line_number(), "",
                       "expected " + std::to_string(width) + " fields, got " +
                           std::to_string(split->size()));
    }
    fields = std::move(*split);
    return true;
  }
  return false;
}

std::uint64_t ParseCount(const std::string& field, std::size_t line,
                         std::string_view column) {
  auto value = csv::ParseUnsigned(field);
  if (!value) {
    throw ParseError(line, std::string(column),
                     "expected a non-negative integer, got '" + field + "'");
  }
  return *value;
}

// Empty string when the categories fit inside the total.
std::string CheckCategorySum(const ZipDemographics& row) {
  std::uint64_t remaining = row.total;
  for (std::uint64_t count : {row.white, row.black, row.asian,
                              row.american_indian, row.pacific_islander}) {
    if (count > remaining) {
      return "category sum exceeds total for zipcode " + row.zipcode;
    }
    remaining -= count;
  }
  return {};
}

std::string RecordInvariantViolation(const AdRecord& record) {
  if (record.keyword.empty()) return "keyword must not be empty";
  if (!IsZipcode(record.zipcode)) return "zipcode must be 5 digits";
  if (record.domain.empty()) return "domain must not be empty";
  if (record.rank < 1) return "rank must be ≥ 1";
  if (!(record.visibility >= 0.0)) return "visibility must be ≥ 0";
  if (!(record.traffic >= 0.0)) return "traffic must be ≥ 0";
  return {};
}

auto RecordKey(const AdRecord& r) {
  return std::tie(r.keyword, r.zipcode, r.domain);
}

std::string DescribeTriple(const AdRecord& r) {
  return "(" + r.keyword + ", " + r.zipcode + ", " + r.domain + ")";
}

}  // namespace

bool IsZipcode(std::string_view text) {
  return text.size() == 5 &&
         std::all_of(text.begin(), text.end(),
                     [](char c) { return c >= '0' && c <= '9'; });
}

std::vector<AdRecord> ParseAdRecords(std::istream& in) {
  csv::LineReader reader(in);
  ExpectHeader(reader, kAdColumns, "no records");

  std::vector<AdRecord> records;
  std::set<std::tuple<std::string, std::string, std::string>> seen;
  std::vector<std::string> fields;
  while (NextRow(reader, kAdColumns.size(), fields)) {
    const std::size_t line = reader.line_number();
    AdRecord record;
    record.keyword = fields[0];
    if (record.keyword.empty()) {
      throw ParseError(line, "keyword", "keyword must not be empty");
    }
    record.zipcode = fields[1];
    if (!IsZipcode(record.zipcode)) {
      throw ParseError(line, "zipcode", "zipcode must be 5 digits");
    }
    record.domain = fields[2];
    if (record.domain.empty()) {
      throw ParseError(line, "domain", "domain must not be empty");
    }

    auto rank = csv::ParseInteger(fields[3]);
    if (!rank) {
      throw ParseError(line, "rank",
                       "expected an integer, got '" + fields[3] + "'");
    }
    if (*rank < 1) throw ParseError(line, "rank", "rank must be ≥ 1");
    record.rank = *rank;

    auto visibility = csv::ParseReal(fields[4]);
    if (!visibility) {
      throw ParseError(line, "visibility",
                       "expected a decimal number, got '" + fields[4] + "'");
    }
    if (*visibility < 0.0) {
      throw ParseError(line, "visibility", "visibility must be ≥ 0");
    }
    record.visibility = *visibility;

    auto traffic = csv::ParseReal(fields[5]);
    if (!traffic) {
      throw ParseError(line, "traffic",
                       "expected a decimal number, got '" + fields[5] + "'");
    }
    if (*traffic < 0.0) {
      throw ParseError(line, "traffic", "traffic must be ≥ 0");
    }
    record.traffic = *traffic;

    if (!seen.emplace(record.keyword, record.zipcode, record.domain).second) {
      throw ParseError(line, "",
                       "duplicate record " + DescribeTriple(record));
    }
    records.push_back(std::move(record));
  }
  if (records.empty()) {
    throw ParseError(reader.line_number(), "", "no records");
  }
  return records;
}

std::vector<ZipDemographics> ParseDemographics(std::istream& in) {
  csv::LineReader reader(in);
  ExpectHeader(reader, kDemographicColumns, "no demographics");

  std::vector<ZipDemographics> rows;
  std::set<std::string> seen;
  std::vector<std::string> fields;
  while (NextRow(reader, kDemographicColumns.size(), fields)) {
    const std::size_t line = reader.line_number();
    ZipDemographics row;
    row.zipcode = fields[0];
    if (!IsZipcode(row.zipcode)) {
      throw ParseError(line, "zipcode", "zipcode must be 5 digits");
    }
    row.total = ParseCount(fields[1], line, kDemographicColumns[1]);
    row.white = ParseCount(fields[2], line, kDemographicColumns[2]);
    row.black = ParseCount(fields[3], line, kDemographicColumns[3]);
    row.asian = ParseCount(fields[4], line, kDemographicColumns[4]);
    row.american_indian = ParseCount(fields[5], line, kDemographicColumns[5]);
    row.pacific_islander = ParseCount(fields[6], line, kDemographicColumns[6]);

    if (auto problem = CheckCategorySum(row); !problem.empty()) {
      throw ParseError(line, "total", problem);
    }
    if (!seen.insert(row.zipcode).second) {
      throw ParseError(line, "zipcode", "duplicate zipcode " + row.zipcode);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    throw ParseError(reader.line_number(), "", "no demographics");
  }
  return rows;
}

void WriteAdRecords(std::ostream& out, std::span<const AdRecord> records) {
  out << kAdRecordsHeader << '\n';
  for (const auto& r : records) {
    out << csv::EscapeField(r.keyword) << ',' << r.zipcode << ','
        << csv::EscapeField(r.domain) << ',' << r.rank << ','
        << csv::FormatReal(r.visibility) << ',' << csv::FormatReal(r.traffic)
        << '\n';
  }
}

void WriteDemographics(std::ostream& out,
                       std::span<const ZipDemographics> demographics) {
  out << kDemographicsHeader << '\n';
  for (const auto& d : demographics) {
    out << d.zipcode << ',' << d.total << ',' << d.white << ',' << d.black
        << ',' << d.asian << ',' << d.american_indian << ','
        << d.pacific_islander << '\n';
  }
}

ValidatedDataset ValidateDataset(std::vector<AdRecord> records,
                                 std::vector<ZipDemographics> demographics,
                                 ValidationMode mode) {
  for (const auto& record : records) {
    if (auto problem = RecordInvariantViolation(record); !problem.empty()) {
      throw AuditError("invalid record " + DescribeTriple(record) + ": " +
                       problem);
    }
  }
  std::sort(records.begin(), records.end(),
            [](const AdRecord& a, const AdRecord& b) {
              return RecordKey(a) < RecordKey(b);
            });
  auto duplicate = std::adjacent_find(
      records.begin(), records.end(), [](const AdRecord& a, const AdRecord& b) {
        return RecordKey(a) == RecordKey(b);
      });
  if (duplicate != records.end()) {
    throw AuditError("duplicate record " + DescribeTriple(*duplicate));
  }

  for (const auto& row : demographics) {
    if (!IsZipcode(row.zipcode)) {
      throw AuditError("demographics zipcode must be 5 digits: '" +
                       row.zipcode + "'");
    }
    if (auto problem = CheckCategorySum(row); !problem.empty()) {
      throw AuditError(problem);
    }
  }
  std::sort(demographics.begin(), demographics.end(),
            [](const ZipDemographics& a, const ZipDemographics& b) {
              return a.zipcode < b.zipcode;
            });
  auto duplicate_zip = std::adjacent_find(
      demographics.begin(), demographics.end(),
      [](const ZipDemographics& a, const ZipDemographics& b) {
        return a.zipcode == b.zipcode;
      });
  if (duplicate_zip != demographics.end()) {
    throw AuditError("duplicate zipcode " + duplicate_zip->zipcode);
  }

  auto has_demographics = [&](const std::string& zip) {
    auto it = std::partition_point(
        demographics.begin(), demographics.end(),
        [&](const ZipDemographics& d) { return d.zipcode < zip; });
    return it != demographics.end() && it->zipcode == zip;
  };

  ValidationReport report;
  std::set<std::string> record_zipcodes;
  std::set<std::string> missing;
  for (const auto& record : records) {
    record_zipcodes.insert(record.zipcode);
    if (!has_demographics(record.zipcode)) missing.insert(record.zipcode);
  }
  report.missing_demographics.assign(missing.begin(), missing.end());
  for (const auto& row : demographics) {
    if (!record_zipcodes.contains(row.zipcode)) {
      report.unused_demographics.push_back(row.zipcode);
    }
  }

  if (!missing.empty()) {
    if (mode == ValidationMode::kStrict) {
      throw ValidationError(report.missing_demographics);
    }
    const auto before = records.size();
    std::erase_if(records, [&](const AdRecord& r) {
      return missing.contains(r.zipcode);
    });
    report.dropped_records = before - records.size();
  }
  if (records.empty()) throw AuditError("no records left after validation");

  Dataset dataset;
  dataset.records_ = std::move(records);
  dataset.demographics_ = std::move(demographics);
  std::set<std::string> keywords;
  std::set<std::string> zipcodes;
  for (const auto& record : dataset.records_) {
    keywords.insert(record.keyword);
    zipcodes.insert(record.zipcode);
  }
  dataset.keywords_.assign(keywords.begin(), keywords.end());
  dataset.zipcodes_.assign(zipcodes.begin(), zipcodes.end());
  return {std::move(dataset), std::move(report)};
}

bool Dataset::HasKeyword(std::string_view keyword) const {
  return std::binary_search(keywords_.begin(), keywords_.end(), keyword);
}

bool Dataset::HasZipcode(std::string_view zipcode) const {
  return std::binary_search(zipcodes_.begin(), zipcodes_.end(), zipcode);
}

std::span<const AdRecord> Dataset::RecordsFor(std::string_view keyword) const {
  auto lower = std::partition_point(
      records_.begin(), records_.end(),
      [&](const AdRecord& r) { return r.keyword < keyword; });
  auto upper = std::partition_point(
      lower, records_.end(),
      [&](const AdRecord& r) { return r.keyword == keyword; });
  return {lower, upper};
}

std::span<const AdRecord> Dataset::RecordsFor(std::string_view keyword,
                                              std::string_view zipcode) const {
  auto by_keyword = RecordsFor(keyword);
  auto lower = std::partition_point(
      by_keyword.begin(), by_keyword.end(),
      [&](const AdRecord& r) { return r.zipcode < zipcode; });
  auto upper = std::partition_point(
      lower, by_keyword.end(),
      [&](const AdRecord& r) { return r.zipcode == zipcode; });
  return {lower, upper};
}

std::vector<std::string> Dataset::DomainsFor(std::string_view keyword) const {
  std::set<std::string> domains;
  for (const auto& record : RecordsFor(keyword)) domains.insert(record.domain);
  return {domains.begin(), domains.end()};
}

const ZipDemographics* Dataset::FindDemographics(
    std::string_view zipcode) const {
  auto it = std::partition_point(
      demographics_.begin(), demographics_.end(),
      [&](const ZipDemographics& d) { return d.zipcode < zipcode; });
  if (it == demographics_.end() || it->zipcode != zipcode) return nullptr;
  return &*it;
}

const ZipDemographics& Dataset::DemographicsFor(
    std::string_view zipcode) const {
  const auto* row = FindDemographics(zipcode);
  if (row == nullptr) {
    throw AuditError("no demographics for zipcode " + std::string(zipcode));
  }
  return *row;
}

}  // namespace geoad
