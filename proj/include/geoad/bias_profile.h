// Copyright 2026 The geoad-audit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "geoad/demographics.h"
#include "geoad/ingest.h"

namespace geoad {

// Which record field orders a domain's zipcodes.
enum class RankBy { kVisibility, kTraffic };

struct RankedZipcode {
  std::string zipcode;
  double score = 0.0;

  friend bool operator==(const RankedZipcode&, const RankedZipcode&) = default;
};

// Zipcodes where `domain` has a record for `keyword`, by score descending,
// ties by zipcode ascending. Throws AuditError if there are none.
std::vector<RankedZipcode> RankZipcodes(const Dataset& dataset,
                                        std::string_view keyword,
                                        std::string_view domain,
                                        RankBy rank_by = RankBy::kVisibility);

struct TopSelection {
  std::vector<RankedZipcode> zipcodes;
  // Fewer than theta zipcodes were available.
  bool shortfall = false;
};

// The first min(theta, ranking.size()) entries. Throws AuditError when
// theta is zero.
TopSelection TopZipcodes(std::span<const RankedZipcode> ranking,
                         std::size_t theta);

// Component-wise sum of the demographic vectors of `zipcodes`.
DemographicVector TargetCounts(std::span<const RankedZipcode> zipcodes,
                               const Dataset& dataset);

// Counts divided by the full population of the target zipcodes. Throws
// AuditError("empty target population") on a zero total.
ShareVector TargetProfile(const DemographicVector& counts);

struct Divergence {
  double white = 0.0;
  double black = 0.0;
  double asian = 0.0;
};

// profile / baseline per category. Throws AuditError naming any category
// whose baseline share is zero.
Divergence DivergenceRatios(const ShareVector& profile,
                            const ShareVector& baseline);

struct TernaryPoint {
  double x = 0.0;
  double y = 0.0;
};

// Barycentric -> Cartesian with corners Asian (0,0), White (1,0) and
// Black (1/2, sqrt(3)/2). When `centered`, shares are first divided by the
// baseline and renormalized so the baseline itself lands on the centroid.
TernaryPoint TernaryCoordinates(const ShareVector& profile,
                                const ShareVector& baseline, bool centered);

struct DomainProfile {
  std::string domain;
  std::string keyword;
  std::size_t theta = 0;
  std::vector<RankedZipcode> top_zipcodes;
  bool shortfall = false;
  DemographicVector counts;
  ShareVector profile_absolute;
  ShareVector profile_relative;
  Divergence divergence;
  TernaryPoint ternary;  // centered on the baseline
};

struct ProfileOptions {
  std::size_t theta = 20;
  RankBy rank_by = RankBy::kVisibility;
};

DomainProfile ProfileDomain(const Dataset& dataset, std::string_view keyword,
                            std::string_view domain,
                            const ShareVector& baseline,
                            const ProfileOptions& options = {});

// Profiles of every domain bidding on `keyword`, sorted by domain.
std::vector<DomainProfile> ProfileKeyword(const Dataset& dataset,
                                          std::string_view keyword,
                                          const ShareVector& baseline,
                                          const ProfileOptions& options = {});

struct CategoryEntry {
  std::string domain;
  double share = 0.0;  // absolute profile share for the category
  bool shortfall = false;
};

struct TopDomains {
  std::vector<CategoryEntry> white;
  std::vector<CategoryEntry> black;
  std::vector<CategoryEntry> asian;
};

// The `n` domains with the largest absolute share per category, ties by
// domain name. Throws AuditError when n is zero.
TopDomains TopDomainsByCategory(std::span<const DomainProfile> profiles,
                                std::size_t n);
// Convenience overload that profiles the keyword against the region
// baseline of `dataset` first.
TopDomains TopDomainsByCategory(const Dataset& dataset,
                                std::string_view keyword, std::size_t n,
                                const ProfileOptions& options = {});

}  // namespace geoad
