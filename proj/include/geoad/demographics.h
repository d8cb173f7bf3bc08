// Copyright 2026 The geoad-audit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>

#include "geoad/ingest.h"

namespace geoad {

// Head counts for the three tracked categories plus the full population
// (which includes every other and redacted category).
struct DemographicVector {
  std::uint64_t white = 0;
  std::uint64_t black = 0;
  std::uint64_t asian = 0;
  std::uint64_t total = 0;

  DemographicVector& operator+=(const DemographicVector& other) {
    white += other.white;
    black += other.black;
    asian += other.asian;
    total += other.total;
    return *this;
  }

  friend DemographicVector operator+(DemographicVector a,
                                     const DemographicVector& b) {
    return a += b;
  }

  friend bool operator==(const DemographicVector&,
                         const DemographicVector&) = default;
};

// kAbsolute: shares of the whole population, summing to at most 1.
// kRelative: renormalized over the three tracked categories, summing to 1.
enum class ShareMode { kAbsolute, kRelative };

struct ShareVector {
  double white = 0.0;
  double black = 0.0;
  double asian = 0.0;
  ShareMode mode = ShareMode::kAbsolute;

  double sum() const { return white + black + asian; }

  friend bool operator==(const ShareVector&, const ShareVector&) = default;
};

DemographicVector ToDemographicVector(const ZipDemographics& zip);

// Population-weighted shares over every row: category sums divided by the
// summed total. Throws AuditError("empty region") when the total is zero.
ShareVector RegionBaseline(std::span<const ZipDemographics> demographics);

// Shares of `counts.total`. Throws AuditError with `empty_message` when the
// total is zero.
ShareVector AbsoluteShares(const DemographicVector& counts,
                           const char* empty_message);

// Renormalizes over white+black+asian. Already-relative input is returned
// unchanged. Throws AuditError("no tracked population") on a zero sum.
ShareVector RelativeShares(const ShareVector& shares);

}  // namespace geoad
