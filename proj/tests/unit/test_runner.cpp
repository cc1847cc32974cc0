#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <random>

#include <unistd.h>

#include "tradekit/core/errors.hpp"
#include "tradekit/core/text.hpp"
#include "tradekit/runner/backtest.hpp"
#include "tradekit/runner/config.hpp"

namespace fs = std::filesystem;
using namespace tradekit;
using namespace tradekit::runner;

namespace {

const fs::path kFixtures = TRADEKIT_FIXTURES;

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("tradekit_runner_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string config_error(std::string_view text) {
  try {
    parse_config(text, kFixtures);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

constexpr std::string_view kMinimal = R"(
[data]
symbols = ["AAA"]
csv_dir = "data"
[split]
train_end = 2021-06-21
[strategy]
name = "buy_and_hold"
)";

nlohmann::json without_clock(nlohmann::json j) {
  j.erase("generated_at");
  return j;
}

nlohmann::json runs_only(const RunReport& r) { return report_to_json(r)["runs"]; }

}  // namespace

TEST(Config, MinimalDefaults) {
  const auto cfg = parse_config(kMinimal, kFixtures);
  EXPECT_EQ(cfg.env.initial_cash, 100000.0);
  EXPECT_EQ(cfg.env.fee_rate, 1e-4);
  EXPECT_EQ(cfg.metrics.periods_per_year, 252.0);
  EXPECT_EQ(cfg.data.csv_dir, kFixtures / "data");
  EXPECT_EQ(cfg.factors.windows, (std::vector<int>{5, 10, 20, 30, 60}));
  EXPECT_EQ(config_to_json(cfg).dump(), config_to_json(parse_config(kMinimal, kFixtures)).dump());
}

TEST(Config, UnknownKeyIsNamed) {
  const std::string msg = config_error(std::string(kMinimal) + "[output]\nstrat = 1\n");
  EXPECT_NE(msg.find("output.strat"), std::string::npos) << msg;
  EXPECT_NE(config_error("strat = \"macd\"\n" + std::string(kMinimal)).find("'strat'"), std::string::npos);
}

TEST(Config, BadValuesAreNamed) {
  std::string text(kMinimal);
  EXPECT_NE(config_error(text + "[env]\nfee_rate = -0.1\n").find("env.fee_rate"), std::string::npos);
  EXPECT_NE(config_error(text + "[metrics]\nnames = [\"XYZ\"]\n").find("metrics.names"), std::string::npos);
  const std::string bad_strategy = config_error(R"(
[data]
symbols = ["AAA"]
[split]
train_end = 2021-06-21
[strategy]
name = "momentum"
)");
  EXPECT_NE(bad_strategy.find("strategy.name"), std::string::npos);
  const std::string dates = config_error(R"(
[data]
symbols = ["AAA"]
start = 2022-01-01
end = 2021-01-01
[split]
train_end = 2021-06-21
[strategy]
name = "buy_and_hold"
)");
  EXPECT_FALSE(dates.empty());
}

TEST(Config, SyntaxErrorCarriesLine) {
  const std::string msg = config_error("[data]\nsymbols = [\"AAA\"\n");
  EXPECT_NE(msg.find("line"), std::string::npos) << msg;
}

TEST(Config, ExtendsOverrides) {
  const auto cfg = load_config(kFixtures / "macd.toml");
  EXPECT_EQ(cfg.env.fee_rate, 1e-4);
  EXPECT_EQ(cfg.env.initial_cash, 100000.0);
  EXPECT_EQ(cfg.data.symbols.size(), 3u);
  EXPECT_EQ(cfg.strategy.name, "macd");
  EXPECT_EQ(cfg.strategy.macd.slow, 26u);
  EXPECT_TRUE(cfg.factors.enabled);
  EXPECT_EQ(cfg.data.news, kFixtures / "news.jsonl");
}

TEST(Backtest, BuyAndHoldReturnIsClosedForm) {
  const auto report = run_backtest(load_config(kFixtures / "base.toml"));
  ASSERT_EQ(report.runs.size(), 1u);
  const auto& run = report.runs[0];
  EXPECT_EQ(run.rets.size(), 252u);
  EXPECT_EQ(run.fees, 0.0);
  const auto* arr = run.metrics.find("ARR");
  ASSERT_TRUE(arr && arr->value);
  EXPECT_NEAR(*arr->value, 0.21, 1e-6);
  EXPECT_EQ(format_timestamp(run.timestamps.front()).substr(0, 10), "2021-06-21");
}

TEST(Backtest, AllHoldHasNoFeesAndUndefinedSharpe) {
  auto cfg = load_config(kFixtures / "threshold.toml");
  cfg.strategy.tau = 1e9;
  const auto report = run_backtest(cfg);
  const auto& run = report.runs.at(0);
  EXPECT_EQ(run.fees, 0.0);
  for (double r : run.rets) EXPECT_EQ(r, 0.0);
  const auto* sr = run.metrics.find("SR");
  ASSERT_TRUE(sr);
  EXPECT_FALSE(sr->value.has_value());
  EXPECT_EQ(*run.metrics.find("ARR")->value, 0.0);
}

TEST(Backtest, DeterministicReports) {
  for (const char* file : {"base.toml", "macd.toml", "topk.toml", "threshold.toml"}) {
    const auto cfg = load_config(kFixtures / file);
    const auto a = report_to_json(run_backtest(cfg));
    const auto b = report_to_json(run_backtest(cfg));
    EXPECT_EQ(without_clock(a).dump(), without_clock(b).dump()) << file;
  }
}

TEST(Backtest, ParallelMatchesSerial) {
  for (const char* file : {"macd.toml", "topk.toml"}) {
    auto cfg = load_config(kFixtures / file);
    cfg.parallel = true;
    const auto par = run_backtest(cfg);
    cfg.parallel = false;
    const auto ser = run_backtest(cfg);
    EXPECT_EQ(runs_only(par).dump(), runs_only(ser).dump()) << file;
    ASSERT_EQ(par.factors.size(), ser.factors.size());
  }
}

TEST(Backtest, StrategiesProduceSensibleRuns) {
  const auto macd = run_backtest(load_config(kFixtures / "macd.toml"));
  EXPECT_EQ(macd.runs.size(), 3u);
  EXPECT_EQ(macd.factors.size(), 3u);
  EXPECT_EQ(macd.factors[0].columns.size(), 145u);

  const auto topk = run_backtest(load_config(kFixtures / "topk.toml"));
  ASSERT_EQ(topk.runs.size(), 1u);
  EXPECT_EQ(topk.runs[0].name, "portfolio");
  EXPECT_GT(topk.runs[0].fees, 0.0);
  for (const auto& rec : topk.runs[0].portfolio_records) {
    double held = 0.0;
    for (double w : rec.weights) held += w > 0.0 ? 1.0 : 0.0;
    EXPECT_LE(held, 2.0);
  }

  const auto thr = run_backtest(load_config(kFixtures / "threshold.toml"));
  EXPECT_EQ(thr.runs.size(), 1u);
}

TEST(Backtest, EmittedLedgerReproducesMetrics) {
  for (const char* file : {"base.toml", "macd.toml", "topk.toml", "threshold.toml"}) {
    const auto cfg = load_config(kFixtures / file);
    const auto report = run_backtest(cfg);
    const fs::path dir = scratch_dir(fs::path(file).stem().string());
    const auto written = emit_report(report, dir);
    EXPECT_TRUE(fs::exists(dir / "report.json"));
    EXPECT_TRUE(fs::exists(dir / "metrics.csv"));
    EXPECT_TRUE(fs::exists(dir / "equity.csv"));
    EXPECT_TRUE(fs::exists(dir / "drawdown.csv"));
    for (const auto& run : report.runs) {
      const auto again = metrics_from_ledger(read_file(dir / ledger_file_name(run.name)), cfg.metrics);
      EXPECT_EQ(metrics::to_json(again).dump(), metrics::to_json(run.metrics).dump()) << file << " " << run.name;
    }
    const auto parsed = nlohmann::json::parse(read_file(dir / "report.json"));
    EXPECT_EQ(parsed["runs"].size(), report.runs.size());
    fs::remove_all(dir);
  }
}

TEST(Backtest, MetricsCsvRows) {
  const auto report = run_backtest(load_config(kFixtures / "base.toml"));
  const fs::path dir = scratch_dir("metrics_csv");
  emit_report(report, dir);
  const std::string text = read_file(dir / "metrics.csv");
  EXPECT_TRUE(text.starts_with("series,metric,value\nAAA,ARR,21.0000\nAAA,SR,")) << text;
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 8);
  fs::remove_all(dir);
}

TEST(Backtest, MissingDataIsAStageError) {
  auto cfg = load_config(kFixtures / "base.toml");
  cfg.data.symbols = {"ZZZ"};
  try {
    run_backtest(cfg);
    FAIL() << "expected StageError";
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), "ingest");
    EXPECT_EQ(e.asset(), "ZZZ");
  }
}

TEST(Predictions, ParseWithGaps) {
  const auto p = parse_predictions_csv("timestamp,A,B\n2021-01-04,0.5,\n2021-01-05,0.25,1\n");
  EXPECT_EQ(p.at("A").size(), 2u);
  EXPECT_EQ(p.at("B").size(), 1u);
  EXPECT_THROW(parse_predictions_csv("timestamp,A\n2021-01-04,x\n"), ParseError);
}
