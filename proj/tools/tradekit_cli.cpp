// tradekit command line: ingest, factors, backtest, metrics, prompt.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "tradekit/core/errors.hpp"
#include "tradekit/core/text.hpp"
#include "tradekit/core/validation.hpp"
#include "tradekit/envs/ledger.hpp"
#include "tradekit/envs/prompt.hpp"
#include "tradekit/factors/alpha158.hpp"
#include "tradekit/factors/io.hpp"
#include "tradekit/ingest/csv.hpp"
#include "tradekit/ingest/news.hpp"
#include "tradekit/ingest/provider.hpp"
#include "tradekit/runner/backtest.hpp"
#include "tradekit/runner/config.hpp"

namespace fs = std::filesystem;
using namespace tradekit;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

AssetSeries load_symbol(const runner::RunConfig& cfg, const std::string& symbol) {
  if (cfg.data.source == "provider") {
    ingest::RateLimiter limiter(cfg.provider.rate_limit, cfg.provider.rate_window);
    return ingest::fetch_bars(cfg.provider, limiter, symbol, ingest::parse_interval(cfg.data.interval),
                              *cfg.data.start, *cfg.data.end)
        .series;
  }
  return ingest::parse_ohlcv_csv(read_file(cfg.data.csv_dir / (symbol + ".csv")), symbol);
}

std::vector<int> parse_windows(const std::string& text) {
  std::vector<int> out;
  for (const auto& part : split_csv_line(text)) {
    const auto v = parse_double(trim(part));
    if (!v || *v < 1 || *v != static_cast<int>(*v)) throw UsageError("--windows expects integers, got '" + text + "'");
    out.push_back(static_cast<int>(*v));
  }
  return out;
}

void write_out(const std::optional<fs::path>& out, const std::string& text) {
  if (out) {
    if (out->has_parent_path()) fs::create_directories(out->parent_path());
    write_file_atomic(*out, text);
  } else {
    std::cout << text;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tradekit: backtesting and trading environments over OHLCV data"};
  app.require_subcommand(1);
  app.set_version_flag("--version", TRADEKIT_VERSION_STRING);

  std::string config_path;
  auto add_config = [&](CLI::App* sub) { return sub->add_option("--config", config_path, "TOML run config"); };

  // ingest
  auto* ingest_cmd = app.add_subcommand("ingest", "Fetch or convert OHLCV data into canonical CSV");
  add_config(ingest_cmd);
  std::string ingest_input;
  std::string ingest_symbol;
  std::string ingest_out;
  ingest_cmd->add_option("--input", ingest_input, "Source CSV (when no config is given)");
  ingest_cmd->add_option("--symbol", ingest_symbol, "Symbol of --input");
  ingest_cmd->add_option("--out", ingest_out, "Output file (with --input) or directory (with --config)");

  // factors
  auto* factors_cmd = app.add_subcommand("factors", "Compute Alpha158 factor tables");
  add_config(factors_cmd);
  std::string factors_input;
  std::string factors_symbol;
  std::string factors_out;
  std::string factors_windows = "5,10,20,30,60";
  factors_cmd->add_option("--input", factors_input, "OHLCV CSV (when no config is given)");
  factors_cmd->add_option("--symbol", factors_symbol, "Symbol of --input");
  factors_cmd->add_option("--windows", factors_windows, "Comma-separated window lengths");
  factors_cmd->add_option("--out", factors_out, "Output file (with --input) or directory (with --config)");

  // backtest
  auto* backtest_cmd = app.add_subcommand("backtest", "Run a config and write the report");
  add_config(backtest_cmd)->required();
  std::string backtest_out;
  backtest_cmd->add_option("--out", backtest_out, "Output directory (overrides output.dir)");

  // metrics
  auto* metrics_cmd = app.add_subcommand("metrics", "Recompute metrics from a ledger");
  add_config(metrics_cmd);
  std::string ledger_path;
  std::string metrics_format = "json";
  std::optional<double> periods_per_year;
  metrics_cmd->add_option("--ledger", ledger_path, "Ledger CSV")->required();
  metrics_cmd->add_option("--format", metrics_format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  metrics_cmd->add_option("--periods-per-year", periods_per_year, "Annualization factor (default 252)");

  // prompt
  auto* prompt_cmd = app.add_subcommand("prompt", "Render the trading prompt for one ledger row");
  add_config(prompt_cmd)->required();
  std::string prompt_ledger;
  std::size_t prompt_row = 0;
  std::string prompt_symbol;
  std::string prompt_name;
  prompt_cmd->add_option("--ledger", prompt_ledger, "Ledger CSV of a trading run")->required();
  prompt_cmd->add_option("--row", prompt_row, "0-based ledger row to decide on")->required();
  prompt_cmd->add_option("--symbol", prompt_symbol, "Symbol (defaults to the config's only symbol)");
  prompt_cmd->add_option("--name", prompt_name, "Display name");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    std::optional<runner::RunConfig> cfg;
    if (!config_path.empty()) cfg = runner::load_config(config_path);

    if (ingest_cmd->parsed()) {
      if (cfg) {
        const fs::path out = ingest_out.empty() ? cfg->output_dir / "data" : fs::path(ingest_out);
        fs::create_directories(out);
        for (const auto& sym : cfg->data.symbols) {
          const auto [series, report] = validate_bars(load_symbol(*cfg, sym), ViolationPolicy::kReject);
          write_file_atomic(out / (sym + ".csv"), ingest::serialize_ohlcv_csv(series));
          std::cerr << sym << ": " << series.size() << " bars -> " << (out / (sym + ".csv")).string() << "\n";
        }
      } else {
        if (ingest_input.empty() || ingest_symbol.empty()) throw UsageError("ingest needs --config or --input and --symbol");
        const auto [series, report] =
            validate_bars(ingest::parse_ohlcv_csv(read_file(ingest_input), ingest_symbol), ViolationPolicy::kReject);
        write_out(ingest_out.empty() ? std::nullopt : std::optional<fs::path>(ingest_out),
                  ingest::serialize_ohlcv_csv(series));
      }
    } else if (factors_cmd->parsed()) {
      if (cfg) {
        const factors::WindowSet windows(cfg->factors.windows);
        const fs::path out = factors_out.empty() ? cfg->output_dir / "factors" : fs::path(factors_out);
        fs::create_directories(out);
        for (const auto& sym : cfg->data.symbols) {
          const auto m = factors::compute_alpha158(load_symbol(*cfg, sym), windows);
          write_file_atomic(out / (sym + ".csv"), factors::factor_csv(m));
        }
      } else {
        if (factors_input.empty() || factors_symbol.empty()) throw UsageError("factors needs --config or --input and --symbol");
        const factors::WindowSet windows(parse_windows(factors_windows));
        const auto m = factors::compute_alpha158(ingest::parse_ohlcv_csv(read_file(factors_input), factors_symbol), windows);
        write_out(factors_out.empty() ? std::nullopt : std::optional<fs::path>(factors_out), factors::factor_csv(m));
      }
    } else if (backtest_cmd->parsed()) {
      const auto report = runner::run_backtest(*cfg);
      const fs::path out = backtest_out.empty() ? cfg->output_dir : fs::path(backtest_out);
      runner::emit_report(report, out);
      for (const auto& r : report.runs) {
        std::cerr << r.name << ": " << r.rets.size() << " steps";
        if (const auto* arr = r.metrics.find("ARR"); arr && arr->value) {
          std::cerr << ", ARR " << format_fixed(*arr->value * 100.0, 4) << "%";
        }
        std::cerr << "\n";
      }
      std::cerr << "report written to " << out.string() << "\n";
    } else if (metrics_cmd->parsed()) {
      runner::MetricsConfig mc = cfg ? cfg->metrics : runner::MetricsConfig{};
      if (periods_per_year) mc.periods_per_year = *periods_per_year;
      const auto report = runner::metrics_from_ledger(read_file(ledger_path), mc);
      if (metrics_format == "csv") {
        std::cout << metrics::to_csv(report);
      } else {
        std::cout << metrics::to_json(report).dump(2) << "\n";
      }
    } else if (prompt_cmd->parsed()) {
      std::string sym = prompt_symbol;
      if (sym.empty()) {
        if (cfg->data.symbols.size() != 1) throw UsageError("--symbol is required when the config lists several symbols");
        sym = cfg->data.symbols.front();
      }
      const auto records = envs::parse_ledger_csv(read_file(prompt_ledger));
      if (prompt_row >= records.size()) {
        throw UsageError("--row " + std::to_string(prompt_row) + " is past the ledger's " +
                         std::to_string(records.size()) + " rows");
      }
      const AssetSeries series = load_symbol(*cfg, sym);
      const auto stamps = series.timestamps();
      const Timestamp now = records[prompt_row].timestamp;
      const auto pos = std::lower_bound(stamps.begin(), stamps.end(), now);
      if (pos == stamps.end() || *pos != now) throw DataError("ledger row timestamp not found in " + sym + " data");
      const auto t = static_cast<std::size_t>(pos - stamps.begin());

      std::vector<NewsItem> news;
      if (cfg->data.news) {
        const auto parsed = ingest::parse_news_jsonl(read_file(*cfg->data.news), ingest::RecordPolicy::kFlag);
        news = ingest::news_window(parsed.items, sym, now, envs::kPromptNewsItems);
      }
      envs::PromptContext ctx;
      ctx.name = prompt_name.empty() ? sym : prompt_name;
      ctx.symbol = sym;
      ctx.bars = series.bars().first(t + 1);
      ctx.records = std::span<const envs::StepRecord>(records).first(prompt_row);
      ctx.news = news;
      ctx.now = now;
      ctx.price = series[t].price();
      ctx.cash = prompt_row == 0 ? cfg->env.initial_cash : records[prompt_row - 1].cash;
      ctx.position = prompt_row == 0 ? 0.0 : records[prompt_row - 1].position;
      std::cout << envs::render_prompt(ctx);
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}
