#include "tradekit/metrics/report.hpp"

#include <algorithm>
#include <array>
#include <functional>

#include "tradekit/core/errors.hpp"
#include "tradekit/core/text.hpp"

namespace tradekit::metrics {

namespace {

constexpr std::array<MetricDef, 7> kRegistry = {{
    {"ARR", Unit::kFractionPerYear},
    {"SR", Unit::kRatio},
    {"MDD", Unit::kFraction},
    {"CR", Unit::kRatio},
    {"SoR", Unit::kRatio},
    {"VOL", Unit::kFractionPerYear},
    {"DD", Unit::kFractionPerYear},
}};

double evaluate(std::string_view name, const ReturnSeries& rs) {
  if (name == "ARR") return arr(rs);
  if (name == "SR") return sharpe(rs);
  if (name == "MDD") return mdd(rs);
  if (name == "CR") return calmar(rs);
  if (name == "SoR") return sortino(rs);
  if (name == "VOL") return vol(rs);
  if (name == "DD") return downside_dev(rs);
  throw ConfigError("unknown metric '" + std::string(name) + "'");
}

const char* unit_name(Unit u) {
  switch (u) {
    case Unit::kFractionPerYear: return "fraction_per_year";
    case Unit::kFraction: return "fraction";
    case Unit::kRatio: return "ratio";
    case Unit::kPercent: return "percent";
  }
  return "ratio";
}

Unit unit_from_name(const std::string& s) {
  if (s == "fraction_per_year") return Unit::kFractionPerYear;
  if (s == "fraction") return Unit::kFraction;
  if (s == "percent") return Unit::kPercent;
  return Unit::kRatio;
}

}  // namespace

std::span<const MetricDef> trading_metric_registry() { return kRegistry; }

bool is_known_metric(std::string_view name) {
  return std::any_of(kRegistry.begin(), kRegistry.end(), [&](const MetricDef& d) { return d.name == name; });
}

const MetricValue* MetricReport::find(std::string_view name) const {
  for (const auto& v : values) {
    if (v.name == name) return &v;
  }
  return nullptr;
}

MetricReport compute_trading_report(const ReturnSeries& rs, std::span<const std::string> names) {
  std::vector<std::string> wanted(names.begin(), names.end());
  if (wanted.empty()) {
    for (const auto& d : kRegistry) wanted.emplace_back(d.name);
  }
  MetricReport report;
  for (const auto& name : wanted) {
    const auto def = std::find_if(kRegistry.begin(), kRegistry.end(), [&](const MetricDef& d) { return d.name == name; });
    if (def == kRegistry.end()) throw ConfigError("unknown metric '" + name + "'");
    MetricValue mv{name, def->unit, std::nullopt, {}};
    try {
      mv.value = evaluate(name, rs);
    } catch (const UndefinedMetricError& e) {
      mv.note = e.what();
    }
    report.values.push_back(std::move(mv));
  }
  return report;
}

nlohmann::json to_json(const MetricReport& report) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& v : report.values) {
    nlohmann::json j;
    j["name"] = v.name;
    j["unit"] = unit_name(v.unit);
    j["value"] = v.value ? nlohmann::json(*v.value) : nlohmann::json(nullptr);
    if (!v.note.empty()) j["note"] = v.note;
    out.push_back(std::move(j));
  }
  return out;
}

MetricReport metric_report_from_json(const nlohmann::json& j) {
  MetricReport report;
  for (const auto& item : j) {
    MetricValue v;
    v.name = item.at("name").get<std::string>();
    v.unit = unit_from_name(item.at("unit").get<std::string>());
    if (!item.at("value").is_null()) v.value = item.at("value").get<double>();
    if (item.contains("note")) v.note = item.at("note").get<std::string>();
    report.values.push_back(std::move(v));
  }
  return report;
}

std::string to_csv(const MetricReport& report) {
  std::string out = "metric,value\n";
  for (const auto& v : report.values) {
    out += v.name;
    out += ',';
    if (!v.value) {
      out += "n/a";
    } else {
      const bool as_percent = v.unit == Unit::kFraction || v.unit == Unit::kFractionPerYear;
      out += format_fixed(as_percent ? *v.value * 100.0 : *v.value, 4);
    }
    out += '\n';
  }
  return out;
}

}  // namespace tradekit::metrics
