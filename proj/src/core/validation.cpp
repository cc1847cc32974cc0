#include "tradekit/core/validation.hpp"

#include <algorithm>
#include <cmath>

#include "tradekit/core/errors.hpp"

namespace tradekit {

std::optional<Violation> check_bar(const Bar& b) {
  auto fail = [&](const char* field, std::string msg) {
    return std::optional<Violation>(Violation{b.timestamp, field, std::move(msg)});
  };
  const std::pair<const char*, double> prices[] = {
      {"open", b.open}, {"high", b.high}, {"low", b.low}, {"close", b.close}};
  for (const auto& [name, v] : prices) {
    if (!std::isfinite(v) || v <= 0.0) return fail(name, "price must be finite and > 0");
  }
  if (b.adjusted_close && (!std::isfinite(*b.adjusted_close) || *b.adjusted_close <= 0.0)) {
    return fail("adjusted_close", "price must be finite and > 0");
  }
  if (!std::isfinite(b.volume) || b.volume < 0.0) return fail("volume", "volume must be finite and >= 0");
  const double body_lo = std::min(b.open, b.close);
  const double body_hi = std::max(b.open, b.close);
  if (b.low > body_lo) return fail("low", "low above min(open, close)");
  if (body_hi > b.high) return fail("high", "high below max(open, close)");
  return std::nullopt;
}

std::pair<AssetSeries, ValidationReport> validate_bars(const AssetSeries& series, ViolationPolicy policy) {
  ValidationReport report;
  std::vector<Bar> kept;
  kept.reserve(series.size());
  for (const Bar& b : series.bars()) {
    auto v = check_bar(b);
    if (!v) {
      kept.push_back(b);
      continue;
    }
    if (policy == ViolationPolicy::kReject) {
      throw ValidationError("series " + series.symbol() + ": invalid " + v->field + " at " +
                            format_timestamp(v->timestamp) + " (" + v->message + ")");
    }
    report.violations.push_back(std::move(*v));
    if (policy == ViolationPolicy::kFlag) kept.push_back(b);
  }
  return {AssetSeries(series.symbol(), std::move(kept)), std::move(report)};
}

}  // namespace tradekit
