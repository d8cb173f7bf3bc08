// Copyright 2026 The geoad-audit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace geoad {

// Base class for every failure caused by bad input or an impossible request.
// Programming errors (broken invariants inside the library) are not reported
// through this hierarchy.
class AuditError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed CSV content. `line` is 1-based and counts the header row.
class ParseError : public AuditError {
 public:
  ParseError(std::size_t line, std::string column, const std::string& message);

  std::size_t line() const { return line_; }
  const std::string& column() const { return column_; }

 private:
  std::size_t line_;
  std::string column_;
};

// Strict validation found record zipcodes without a demographics row.
class ValidationError : public AuditError {
 public:
  explicit ValidationError(std::vector<std::string> uncovered_zipcodes);

  const std::vector<std::string>& uncovered_zipcodes() const {
    return uncovered_zipcodes_;
  }

 private:
  std::vector<std::string> uncovered_zipcodes_;
};

}  // namespace geoad
