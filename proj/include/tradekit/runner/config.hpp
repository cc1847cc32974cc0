#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "tradekit/core/time.hpp"
#include "tradekit/envs/trading_env.hpp"
#include "tradekit/ingest/provider.hpp"
#include "tradekit/strategies/strategies.hpp"

namespace tradekit::runner {

struct DataConfig {
  std::string source = "csv";  // csv | provider
  std::vector<std::string> symbols;
  std::string interval = "1d";
  std::optional<Timestamp> start;
  std::optional<Timestamp> end;  // inclusive
  std::filesystem::path csv_dir;  // <csv_dir>/<SYMBOL>.csv
  std::optional<std::filesystem::path> news;
};

struct FactorConfig {
  bool enabled = false;
  std::vector<int> windows{5, 10, 20, 30, 60};
  std::optional<std::filesystem::path> cache_dir;
  bool standardize = true;  // z-score with train-split moments per symbol
};

struct StrategyConfig {
  std::string name;
  strategies::MacdParams macd;
  double tau = 0.0;
  strategies::TopkParams topk;
  std::optional<std::filesystem::path> predictions;
};

struct EnvSettings {
  double initial_cash = envs::kDefaultInitialCash;
  double fee_rate = envs::kDefaultFeeRate;
};

struct MetricsConfig {
  std::vector<std::string> names;  // empty = all registered
  double periods_per_year = 252.0;
  double risk_free = 0.0;
};

struct RunConfig {
  DataConfig data;
  ingest::ProviderConfig provider;
  Timestamp train_end{};
  FactorConfig factors;
  StrategyConfig strategy;
  EnvSettings env;
  MetricsConfig metrics;
  std::filesystem::path output_dir;
  std::uint64_t seed = 0;
  bool parallel = true;
};

/// Strategy identifiers accepted in `strategy.name`.
std::vector<std::string_view> strategy_registry();

/// Loads a TOML run config. `extends = "base.toml"` (relative to the file)
/// merges a base config underneath, tables deep-merged, later files win.
/// Relative paths resolve against the file that sets them. Unknown keys,
/// bad types, unknown strategies or metrics and inconsistent dates throw
/// ConfigError naming the key path; TOML syntax errors carry the line.
RunConfig load_config(const std::filesystem::path& path);

/// Same, from text; relative paths resolve against `base_dir`.
RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir);

/// Deterministic echo of the resolved config.
nlohmann::json config_to_json(const RunConfig& cfg);

}  // namespace tradekit::runner
