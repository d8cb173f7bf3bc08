// Copyright 2026 The geoad-audit Authors
// SPDX-License-Identifier: Apache-2.0

#include "geoad/bias_profile.h"

#include <algorithm>
#include <cmath>

#include "geoad/error.h"

namespace geoad {
namespace {

void RequirePositiveBaseline(const ShareVector& baseline) {
  if (!(baseline.white > 0.0)) throw AuditError("baseline share for white is zero");
  if (!(baseline.black > 0.0)) throw AuditError("baseline share for black is zero");
  if (!(baseline.asian > 0.0)) throw AuditError("baseline share for asian is zero");
}

}  // namespace

std::vector<RankedZipcode> RankZipcodes(const Dataset& dataset,
                                        std::string_view keyword,
                                        std::string_view domain,
                                        RankBy rank_by) {
  std::vector<RankedZipcode> ranking;
  for (const auto& record : dataset.RecordsFor(keyword)) {
    if (record.domain != domain) continue;
    ranking.push_back({record.zipcode, rank_by == RankBy::kVisibility
                                           ? record.visibility
                                           : record.traffic});
  }
  if (ranking.empty()) {
    throw AuditError("domain '" + std::string(domain) +
                     "' has no records for keyword '" + std::string(keyword) +
                     "'");
  }
  std::sort(ranking.begin(), ranking.end(),
            [](const RankedZipcode& a, const RankedZipcode& b) {
              if (a.score != b.score) return a.score > b.score;
              return a.zipcode < b.zipcode;
            });
  return ranking;
}

TopSelection TopZipcodes(std::span<const RankedZipcode> ranking,
                         std::size_t theta) {
  if (theta == 0) throw AuditError("theta must be at least 1");
  const std::size_t take = std::min(theta, ranking.size());
  return {{ranking.begin(), ranking.begin() + static_cast<std::ptrdiff_t>(take)},
          ranking.size() < theta};
}

DemographicVector TargetCounts(std::span<const RankedZipcode> zipcodes,
                               const Dataset& dataset) {
  DemographicVector counts;
  for (const auto& entry : zipcodes) {
    counts += ToDemographicVector(dataset.DemographicsFor(entry.zipcode));
  }
  return counts;
}

ShareVector TargetProfile(const DemographicVector& counts) {
  return AbsoluteShares(counts, "empty target population");
}

Divergence DivergenceRatios(const ShareVector& profile,
                            const ShareVector& baseline) {
  if (profile.mode != baseline.mode) {
    throw AuditError("profile and baseline must use the same share mode");
  }
  RequirePositiveBaseline(baseline);
  return {profile.white / baseline.white, profile.black / baseline.black,
          profile.asian / baseline.asian};
}

TernaryPoint TernaryCoordinates(const ShareVector& profile,
                                const ShareVector& baseline, bool centered) {
  ShareVector weights = RelativeShares(profile);
  if (centered) {
    RequirePositiveBaseline(baseline);
    weights = RelativeShares({weights.white / baseline.white,
                              weights.black / baseline.black,
                              weights.asian / baseline.asian,
                              ShareMode::kAbsolute});
  }
  static const double kHeight = std::sqrt(3.0) / 2.0;
  return {weights.white + 0.5 * weights.black, kHeight * weights.black};
}

DomainProfile ProfileDomain(const Dataset& dataset, std::string_view keyword,
                            std::string_view domain,
                            const ShareVector& baseline,
                            const ProfileOptions& options) {
  DomainProfile profile;
  profile.domain = domain;
  profile.keyword = keyword;
  profile.theta = options.theta;

  const auto ranking = RankZipcodes(dataset, keyword, domain, options.rank_by);
  TopSelection top = TopZipcodes(ranking, options.theta);
  profile.top_zipcodes = std::move(top.zipcodes);
  profile.shortfall = top.shortfall;
  profile.counts = TargetCounts(profile.top_zipcodes, dataset);
  try {
    profile.profile_absolute = TargetProfile(profile.counts);
    profile.profile_relative = RelativeShares(profile.profile_absolute);
  } catch (const AuditError& e) {
    throw AuditError("domain '" + profile.domain + "': " + e.what());
  }
  profile.divergence = DivergenceRatios(profile.profile_absolute, baseline);
  profile.ternary = TernaryCoordinates(profile.profile_absolute, baseline,
                                       /*centered=*/true);
  return profile;
}

std::vector<DomainProfile> ProfileKeyword(const Dataset& dataset,
                                          std::string_view keyword,
                                          const ShareVector& baseline,
                                          const ProfileOptions& options) {
  if (!dataset.HasKeyword(keyword)) {
    throw AuditError("unknown keyword '" + std::string(keyword) + "'");
  }
  std::vector<DomainProfile> profiles;
  for (const auto& domain : dataset.DomainsFor(keyword)) {
    profiles.push_back(
        ProfileDomain(dataset, keyword, domain, baseline, options));
  }
  return profiles;
}

TopDomains TopDomainsByCategory(std::span<const DomainProfile> profiles,
                                std::size_t n) {
  if (n == 0) throw AuditError("n must be at least 1");
  auto column = [&](double ShareVector::*category) {
    std::vector<CategoryEntry> entries;
    for (const auto& profile : profiles) {
      entries.push_back({profile.domain, profile.profile_absolute.*category,
                         profile.shortfall});
    }
    std::sort(entries.begin(), entries.end(),
              [](const CategoryEntry& a, const CategoryEntry& b) {
                if (a.share != b.share) return a.share > b.share;
                return a.domain < b.domain;
              });
    if (entries.size() > n) entries.resize(n);
    return entries;
  };
  return {column(&ShareVector::white), column(&ShareVector::black),
          column(&ShareVector::asian)};
}

TopDomains TopDomainsByCategory(const Dataset& dataset,
                                std::string_view keyword, std::size_t n,
                                const ProfileOptions& options) {
  const auto baseline = RegionBaseline(dataset.demographics());
  const auto profiles = ProfileKeyword(dataset, keyword, baseline, options);
  return TopDomainsByCategory(profiles, n);
}

}  // namespace geoad
