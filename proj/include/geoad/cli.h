// Copyright 2026 The geoad-audit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "geoad/bias_profile.h"

namespace geoad::cli {

inline constexpr const char* kConfigEnvVar = "GEOAD_AUDIT_CONFIG";

enum ExitCode : int { kOk = 0, kFailure = 1, kUsage = 2 };

// Bad flags, config keys, or values. Maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::filesystem::path ads_path;
  std::filesystem::path demographics_path;
  std::optional<std::filesystem::path> boundaries_path;
  std::optional<std::string> keyword;
  std::size_t theta = 20;
  double resolution = 1.0;
  std::uint64_t seed = 42;
  std::filesystem::path out_dir = "out";
  bool strict = false;
  RankBy rank_by = RankBy::kVisibility;
  bool normalize_traffic = false;
  unsigned jobs = 1;
  std::size_t bins = 20;
  std::size_t top_n = 10;
  std::size_t max_iterations = 100;
  std::vector<std::string> domains;
};

// Applies `key = value` lines ('#' starts a comment) on top of `config`.
// Relative paths are resolved against `base_dir`. Throws UsageError on an
// unknown key or unparsable value.
void ApplyConfigText(std::istream& in, const std::filesystem::path& base_dir,
                     RunConfig& config);

// Throws UsageError when a field violates its constraint.
void CheckConfig(const RunConfig& config);

// Directory name for each keyword: lowercase alphanumerics joined by '-',
// disambiguated with a numeric suffix in sorted keyword order.
std::vector<std::pair<std::string, std::string>> KeywordDirectories(
    std::span<const std::string> keywords);

// Entry point. `args[0]` is the program name. Returns the process exit code.
int Run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace geoad::cli
