// Copyright 2026 The geoad-audit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Minimal CSV plumbing shared by the readers and writers. Fields may be
// double-quoted (RFC 4180 style, `""` escapes a quote) but a record never
// spans lines.
namespace geoad::csv {

// Reads one physical line, stripping a trailing '\r' and, on the first line
// of the stream, a UTF-8 byte order mark. Returns false at end of stream.
class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  bool Next(std::string& line);
  std::size_t line_number() const { return line_number_; }

 private:
  std::istream& in_;
  std::size_t line_number_ = 0;
};

// Splits a line into fields. Returns nullopt on an unterminated quote or
// stray characters after a closing quote.
std::optional<std::vector<std::string>> SplitLine(std::string_view line);

// Quotes `field` only when it contains a comma, quote, or line break.
std::string EscapeField(std::string_view field);

std::string JoinHeader(const std::vector<std::string_view>& columns);

// Strict decimal parsers: the whole field must be consumed, no sign prefix,
// no surrounding whitespace, and floating values must be finite.
std::optional<std::uint64_t> ParseUnsigned(std::string_view field);
std::optional<std::int64_t> ParseInteger(std::string_view field);
std::optional<double> ParseReal(std::string_view field);

// Shortest decimal string that parses back to exactly `value`.
std::string FormatReal(double value);

}  // namespace geoad::csv
