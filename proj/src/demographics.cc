// Copyright 2026 The geoad-audit Authors
// SPDX-License-Identifier: Apache-2.0

#include "geoad/demographics.h"

#include "geoad/error.h"

namespace geoad {

DemographicVector ToDemographicVector(const ZipDemographics& zip) {
  return {zip.white, zip.black, zip.asian, zip.total};
}

ShareVector AbsoluteShares(const DemographicVector& counts,
                           const char* empty_message) {
  if (counts.total == 0) throw AuditError(empty_message);
  const double total = static_cast<double>(counts.total);
  return {static_cast<double>(counts.white) / total,
          static_cast<double>(counts.black) / total,
          static_cast<double>(counts.asian) / total, ShareMode::kAbsolute};
}

ShareVector RegionBaseline(std::span<const ZipDemographics> demographics) {
  DemographicVector sum;
  for (const auto& zip : demographics) sum += ToDemographicVector(zip);
  return AbsoluteShares(sum, "empty region");
}

ShareVector RelativeShares(const ShareVector& shares) {
  if (shares.mode == ShareMode::kRelative) return shares;
  const double tracked = shares.sum();
  if (!(tracked > 0.0)) throw AuditError("no tracked population");
  return {shares.white / tracked, shares.black / tracked,
          shares.asian / tracked, ShareMode::kRelative};
}

}  // namespace geoad
