// Copyright 2026 The geoad-audit Authors
// SPDX-License-Identifier: Apache-2.0

#include "geoad/csv.h"

#include <array>
#include <charconv>
#include <cmath>

#include "geoad/error.h"

namespace geoad {

ParseError::ParseError(std::size_t line, std::string column,
                       const std::string& message)
    : AuditError("line " + std::to_string(line) +
                 (column.empty() ? std::string() : ", column " + column) +
                 ": " + message),
      line_(line),
      column_(std::move(column)) {}

namespace {

std::string JoinZipcodes(const std::vector<std::string>& zipcodes) {
  std::string joined;
  for (const auto& zip : zipcodes) {
    if (!joined.empty()) joined += ", ";
    joined += zip;
  }
  return joined;
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> uncovered_zipcodes)
    : AuditError("zipcodes without demographics: " +
                 JoinZipcodes(uncovered_zipcodes)),
      uncovered_zipcodes_(std::move(uncovered_zipcodes)) {}

namespace csv {

bool LineReader::Next(std::string& line) {
  if (!std::getline(in_, line)) return false;
  ++line_number_;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line_number_ == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
  return true;
}

std::optional<std::vector<std::string>> SplitLine(std::string_view line) {
  std::vector<std::string> fields;
  std::string field;
  std::size_t i = 0;
  while (true) {
    field.clear();
    if (i < line.size() && line[i] == '"') {
      ++i;
      bool closed = false;
      while (i < line.size()) {
        if (line[i] == '"') {
          if (i + 1 < line.size() && line[i + 1] == '"') {
            field += '"';
            i += 2;
            continue;
          }
          closed = true;
          ++i;
          break;
        }
        field += line[i++];
      }
      if (!closed) return std::nullopt;
      if (i < line.size() && line[i] != ',') return std::nullopt;
    } else {
      while (i < line.size() && line[i] != ',') {
        if (line[i] == '"') return std::nullopt;
        field += line[i++];
      }
    }
    fields.push_back(field);
    if (i >= line.size()) break;
    ++i;  // comma
  }
  return fields;
}

std::string EscapeField(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(field);
  }
  std::string quoted = "\"";
  for (char c : field) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

std::string JoinHeader(const std::vector<std::string_view>& columns) {
  std::string header;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) header += ',';
    header += columns[i];
  }
  return header;
}

std::optional<std::uint64_t> ParseUnsigned(std::string_view field) {
  std::uint64_t value = 0;
  const char* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

std::optional<std::int64_t> ParseInteger(std::string_view field) {
  std::int64_t value = 0;
  const char* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

std::optional<double> ParseReal(std::string_view field) {
  double value = 0;
  const char* end = field.data() + field.size();
  auto [ptr, ec] =
      std::from_chars(field.data(), end, value, std::chars_format::general);
  if (field.empty() || ec != std::errc() || ptr != end) return std::nullopt;
  if (!std::isfinite(value)) return std::nullopt;
  return value;
}

std::string FormatReal(double value) {
  std::array<char, 64> buffer{};
  auto [ptr, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(),
                                 value);
  return std::string(buffer.data(), ptr);
}

}  // namespace csv
}  // namespace geoad
