#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "tradekit/metrics/trading.hpp"

namespace tradekit::metrics {

enum class Unit { kFractionPerYear, kFraction, kRatio, kPercent };

struct MetricDef {
  std::string_view name;
  Unit unit;
};

/// Registry of trading metric names in report order.
std::span<const MetricDef> trading_metric_registry();
bool is_known_metric(std::string_view name);

struct MetricValue {
  std::string name;
  Unit unit = Unit::kRatio;
  std::optional<double> value;  // nullopt renders as n/a
  std::string note;             // why it is undefined
};

struct MetricReport {
  std::vector<MetricValue> values;

  const MetricValue* find(std::string_view name) const;
};

/// Evaluates `names` (all registered metrics when empty) over the series.
/// Undefined metrics are kept with no value and the reason in `note`.
/// Throws ConfigError on unknown names.
MetricReport compute_trading_report(const ReturnSeries& rs, std::span<const std::string> names = {});

/// Fractions at full precision; undefined metrics become null.
nlohmann::json to_json(const MetricReport& report);
MetricReport metric_report_from_json(const nlohmann::json& j);

/// "metric,value" rows; fractions shown as percent, all values with 4
/// decimals, undefined as n/a.
std::string to_csv(const MetricReport& report);

}  // namespace tradekit::metrics
