#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "tradekit/core/errors.hpp"
#include "tradekit/core/types.hpp"
#include "tradekit/envs/portfolio_env.hpp"
#include "tradekit/envs/trading_env.hpp"
#include "tradekit/ingest/provider.hpp"
#include "tradekit/metrics/report.hpp"
#include "tradekit/runner/config.hpp"

namespace tradekit::runner {

/// Failure inside one pipeline stage, tagged with the stage and asset.
class StageError : public Error {
 public:
  StageError(std::string stage, std::string asset, const std::string& what);
  const std::string& stage() const noexcept { return stage_; }
  const std::string& asset() const noexcept { return asset_; }

 private:
  std::string stage_;
  std::string asset_;
};

/// One simulated book over the test split.
struct SeriesRun {
  std::string name;                   // symbol, or "portfolio"
  std::vector<Timestamp> timestamps;  // test-split bars; one more than steps
  std::vector<envs::StepRecord> records;
  std::vector<envs::PortfolioRecord> portfolio_records;
  std::vector<double> rets;  // per-step net returns, the metric input
  double fees = 0.0;
  metrics::MetricReport metrics;
};

struct RunReport {
  std::string version;
  std::string generated_at;
  nlohmann::json config;
  std::string strategy;
  std::vector<std::string> symbols;
  std::vector<SeriesRun> runs;
  std::vector<ingest::Provenance> provenance;
  std::vector<FeatureMatrix> factors;  // empty unless factors are enabled
};

/// Wide predictions CSV: "timestamp,<SYM>,<SYM>..." with empty cells for
/// missing values. Returns symbol -> timestamp -> value.
std::map<std::string, std::map<Timestamp, double>> parse_predictions_csv(std::string_view bytes);

/// Loads series (CSV files or provider), validates bars, computes factors
/// when enabled, derives causal signals and simulates the test split.
/// Throws StageError.
RunReport run_backtest(const RunConfig& cfg);

/// report.json payload.
nlohmann::json report_to_json(const RunReport& report);

/// Ledger file name for a run.
std::string ledger_file_name(const std::string& series);

/// Writes report.json, metrics.csv, equity.csv, drawdown.csv, one ledger per
/// run and factors/<SYMBOL>.csv, each atomically. Returns the paths written.
std::vector<std::filesystem::path> emit_report(const RunReport& report, const std::filesystem::path& dir);

/// Metrics for a ledger file alone (trading or portfolio layout).
metrics::MetricReport metrics_from_ledger(std::string_view ledger_bytes, const MetricsConfig& cfg);

}  // namespace tradekit::runner
