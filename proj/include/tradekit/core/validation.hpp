#pragma once

#include <string>
#include <utility>
#include <vector>

#include "tradekit/core/types.hpp"

namespace tradekit {

enum class ViolationPolicy { kReject, kDrop, kFlag };

struct Violation {
  Timestamp timestamp{};
  std::string field;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool empty() const noexcept { return violations.empty(); }
};

/// First broken invariant of `bar`, if any. Checks finiteness, positive
/// prices, non-negative volume and low <= min(open, close) <= max(open, close) <= high.
std::optional<Violation> check_bar(const Bar& bar);

/// kReject throws ValidationError on the first bad bar; kDrop removes bad
/// bars; kFlag returns the series untouched. The report lists every violation
/// found (one per offending bar).
std::pair<AssetSeries, ValidationReport> validate_bars(const AssetSeries& series, ViolationPolicy policy);

}  // namespace tradekit
