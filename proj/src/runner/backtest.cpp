#include "tradekit/runner/backtest.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>

#include "tradekit/core/text.hpp"
#include "tradekit/core/validation.hpp"
#include "tradekit/envs/ledger.hpp"
#include "tradekit/factors/alpha158.hpp"
#include "tradekit/factors/io.hpp"
#include "tradekit/ingest/calendar.hpp"
#include "tradekit/ingest/csv.hpp"
#include "tradekit/ingest/scaler.hpp"
#include "tradekit/metrics/trading.hpp"
#include "tradekit/strategies/strategies.hpp"

#ifndef TRADEKIT_VERSION_STRING
#define TRADEKIT_VERSION_STRING "0.0.0"
#endif

namespace tradekit::runner {

namespace fs = std::filesystem;

StageError::StageError(std::string stage, std::string asset, const std::string& what)
    : Error(stage + (asset.empty() ? "" : " [" + asset + "]") + ": " + what),
      stage_(std::move(stage)),
      asset_(std::move(asset)) {}

namespace {

template <class F>
auto stage(const std::string& name, const std::string& asset, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, asset, e.what());
  }
}

AssetSeries clip_range(const AssetSeries& s, const DataConfig& data) {
  std::size_t b = 0;
  std::size_t e = s.size();
  if (data.start) {
    while (b < e && s[b].timestamp < *data.start) ++b;
  }
  if (data.end) {
    while (e > b && s[e - 1].timestamp > *data.end) --e;
  }
  return s.slice(b, e);
}

std::vector<AssetSeries> load_series(const RunConfig& cfg, std::vector<ingest::Provenance>& provenance) {
  std::vector<AssetSeries> out;
  if (cfg.data.source == "provider") {
    ingest::RateLimiter limiter(cfg.provider.rate_limit, cfg.provider.rate_window);
    const auto interval = ingest::parse_interval(cfg.data.interval);
    for (const auto& sym : cfg.data.symbols) {
      auto res = stage("ingest", sym, [&] {
        return ingest::fetch_bars(cfg.provider, limiter, sym, interval, *cfg.data.start, *cfg.data.end);
      });
      provenance.push_back(res.provenance);
      out.push_back(clip_range(res.series, cfg.data));
    }
    return out;
  }
  for (const auto& sym : cfg.data.symbols) {
    out.push_back(stage("ingest", sym, [&] {
      const fs::path path = cfg.data.csv_dir / (sym + ".csv");
      if (!fs::exists(path)) throw DataError("missing data file " + path.string());
      return clip_range(ingest::parse_ohlcv_csv(read_file(path), sym), cfg.data);
    }));
  }
  return out;
}

std::size_t test_start(std::span<const Timestamp> calendar, Timestamp train_end) {
  const std::size_t s = split_index(calendar, SplitSpec{train_end});
  if (s + 1 >= calendar.size()) throw DataError("test split needs at least 2 bars");
  return s;
}

std::string iso_now() {
  const auto now = std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
  std::string s = format_datetime(now);
  s[10] = 'T';
  return s + "Z";
}

void finish(SeriesRun& run, const MetricsConfig& mc) {
  const metrics::ReturnSeries rs{run.rets, mc.periods_per_year, mc.risk_free};
  run.metrics = metrics::compute_trading_report(rs, mc.names);
}

SeriesRun simulate_single(const RunConfig& cfg, const AssetSeries& series,
                          const std::map<std::string, std::map<Timestamp, double>>* predictions) {
  const std::string& sym = series.symbol();
  const auto stamps = series.timestamps();
  const std::size_t s = stage("split", sym, [&] { return test_start(stamps, cfg.train_end); });
  const std::size_t steps = series.size() - 1 - s;

  const std::vector<envs::Action> actions = stage("signals", sym, [&] {
    const auto& name = cfg.strategy.name;
    if (name == "buy_and_hold") return strategies::buy_and_hold(steps);
    if (name == "macd") {
      const auto closes = series.closes();
      const auto r = strategies::macd_signals(closes, cfg.strategy.macd, s);
      return std::vector<envs::Action>(r.actions.begin() + static_cast<std::ptrdiff_t>(s),
                                       r.actions.begin() + static_cast<std::ptrdiff_t>(s + steps));
    }
    // threshold: prediction for the decision bar, HOLD where none is given
    std::vector<double> yhat(steps, 0.0);
    const auto it = predictions->find(sym);
    if (it == predictions->end()) throw DataError("predictions file has no column for " + sym);
    for (std::size_t j = 0; j < steps; ++j) {
      const auto p = it->second.find(stamps[s + j]);
      if (p != it->second.end()) yhat[j] = p->second;
    }
    return strategies::threshold_rule(yhat, cfg.strategy.tau);
  });

  return stage("env", sym, [&] {
    envs::TradingEnvConfig ec;
    ec.series = series;
    ec.initial_cash = cfg.env.initial_cash;
    ec.fee_rate = cfg.env.fee_rate;
    ec.start_index = s;
    envs::TradingEnv env(std::move(ec));
    SeriesRun run;
    run.name = sym;
    run.timestamps.assign(stamps.begin() + static_cast<std::ptrdiff_t>(s), stamps.end());
    for (envs::Action a : actions) {
      const auto res = env.step(a);
      run.rets.push_back(res.record.ret);
    }
    run.records.assign(env.records().begin(), env.records().end());
    run.fees = env.state().fees;
    finish(run, cfg.metrics);
    return run;
  });
}

SeriesRun simulate_topk(const RunConfig& cfg, const std::vector<AssetSeries>& series,
                        const std::map<std::string, std::map<Timestamp, double>>& predictions) {
  const Panel panel = stage("align", "", [&] { return ingest::align_calendar(series); });
  const auto& cal = panel.calendar();
  const std::size_t s = stage("split", "", [&] { return test_start(cal, cfg.train_end); });
  const std::size_t steps = cal.size() - 1 - s;

  const auto plan = stage("signals", "", [&] {
    strategies::ScorePanel scores;
    scores.symbols = panel.symbols();
    scores.num_times = steps;
    scores.values.assign(panel.num_assets() * steps, 0.0);
    scores.mask.assign(panel.num_assets() * steps, 0);
    for (std::size_t a = 0; a < panel.num_assets(); ++a) {
      const auto it = predictions.find(panel.symbols()[a]);
      if (it == predictions.end()) continue;
      for (std::size_t j = 0; j < steps; ++j) {
        const auto p = it->second.find(cal[s + j]);
        if (p != it->second.end() && panel.present(a, s + j)) {
          scores.values[a * steps + j] = p->second;
          scores.mask[a * steps + j] = 1;
        }
      }
    }
    return strategies::topk_dropout(scores, cfg.strategy.topk);
  });

  return stage("env", "portfolio", [&] {
    envs::PortfolioEnvConfig pc;
    pc.panel = panel;
    pc.initial_cash = cfg.env.initial_cash;
    pc.fee_rate = cfg.env.fee_rate;
    pc.start_index = s;
    envs::PortfolioState st = envs::portfolio_reset(pc);
    SeriesRun run;
    run.name = "portfolio";
    run.timestamps.assign(cal.begin() + static_cast<std::ptrdiff_t>(s), cal.end());
    for (std::size_t j = 0; j < steps; ++j) {
      auto res = envs::portfolio_step(pc, st, plan.weights[j]);
      st = std::move(res.state);
      run.rets.push_back((res.record.post_value - res.record.pre_value) / res.record.pre_value);
      run.portfolio_records.push_back(std::move(res.record));
    }
    run.fees = st.fees;
    finish(run, cfg.metrics);
    return run;
  });
}

std::string safe_name(const std::string& s) {
  std::string out = s;
  for (char& c : out) {
    const bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-' ||
                    c == '_' || c == '.';
    if (!ok) c = '_';
  }
  return out;
}

std::string portfolio_net_ledger(const SeriesRun& run, std::span<const std::string> symbols) {
  // The env's ret is measured from the post-cost value; net_ret from the
  // pre-trade value is what the metrics use.
  const std::string base = envs::portfolio_ledger_csv(run.portfolio_records, symbols);
  const auto lines = split_lines(base);
  std::string out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    out.append(lines[i]);
    out += ',';
    out += i == 0 ? std::string("net_ret") : format_shortest(run.rets[i - 1]);
    out += '\n';
  }
  return out;
}

}  // namespace

std::map<std::string, std::map<Timestamp, double>> parse_predictions_csv(std::string_view bytes) {
  const auto lines = split_lines(bytes);
  if (lines.empty()) throw ParseError("predictions: empty file");
  const auto header = split_csv_line(lines[0]);
  if (header.size() < 2 || to_lower(trim(header[0])) != "timestamp") {
    throw ParseError("predictions: header must be timestamp,<symbols...>");
  }
  std::map<std::string, std::map<Timestamp, double>> out;
  for (std::size_t c = 1; c < header.size(); ++c) out[std::string(trim(header[c]))];
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    const auto f = split_csv_line(lines[i]);
    if (f.size() != header.size()) throw ParseError("predictions: row " + std::to_string(i + 1) + " has wrong field count");
    const Timestamp ts = parse_timestamp(trim(f[0]));
    for (std::size_t c = 1; c < f.size(); ++c) {
      if (trim(f[c]).empty()) continue;
      const auto v = parse_double(trim(f[c]));
      if (!v || !std::isfinite(*v)) {
        throw ParseError("predictions: row " + std::to_string(i + 1) + ", column " + header[c] + " is not a number");
      }
      out[std::string(trim(header[c]))][ts] = *v;
    }
  }
  return out;
}

RunReport run_backtest(const RunConfig& cfg) {
  RunReport report;
  report.version = TRADEKIT_VERSION_STRING;
  report.generated_at = iso_now();
  report.config = config_to_json(cfg);
  report.strategy = cfg.strategy.name;
  report.symbols = cfg.data.symbols;

  std::vector<AssetSeries> raw = load_series(cfg, report.provenance);
  std::vector<AssetSeries> series;
  for (const auto& s : raw) {
    series.push_back(stage("validate", s.symbol(), [&] { return validate_bars(s, ViolationPolicy::kReject).first; }));
  }

  std::map<std::string, std::map<Timestamp, double>> predictions;
  if (cfg.strategy.predictions) {
    predictions = stage("signals", "", [&] { return parse_predictions_csv(read_file(*cfg.strategy.predictions)); });
  }

  const std::size_t n = series.size();
  if (cfg.factors.enabled) {
    const factors::WindowSet windows(cfg.factors.windows);
    std::vector<FeatureMatrix> raw_factors(n);
    std::vector<std::exception_ptr> errors(n);
#pragma omp parallel for schedule(dynamic, 1) if (cfg.parallel)
    for (std::size_t i = 0; i < n; ++i) {
      try {
        raw_factors[i] = stage("factors", series[i].symbol(), [&] {
          if (cfg.factors.cache_dir) {
            const factors::FactorCache cache(*cfg.factors.cache_dir);
            return factors::compute_alpha158_cached(series[i], windows, cache, factors::ExecPolicy::kSerial).matrix;
          }
          return factors::compute_alpha158(series[i], windows, factors::ExecPolicy::kSerial);
        });
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
    if (cfg.factors.standardize) {
      for (std::size_t i = 0; i < n; ++i) {
        report.factors.push_back(stage("factors", series[i].symbol(), [&] {
          const auto params = ingest::fit_scaler(std::span<const FeatureMatrix>(&raw_factors[i], 1),
                                                 SplitSpec{cfg.train_end});
          return ingest::apply_scaler(raw_factors[i], params);
        }));
      }
    } else {
      report.factors = std::move(raw_factors);
    }
  }

  if (cfg.strategy.name == "topk_dropout") {
    report.runs.push_back(simulate_topk(cfg, series, predictions));
    return report;
  }

  std::vector<SeriesRun> runs(n);
  std::vector<std::exception_ptr> errors(n);
#pragma omp parallel for schedule(dynamic, 1) if (cfg.parallel)
  for (std::size_t i = 0; i < n; ++i) {
    try {
      runs[i] = simulate_single(cfg, series[i], &predictions);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  report.runs = std::move(runs);
  return report;
}

std::string ledger_file_name(const std::string& series) { return "ledger_" + safe_name(series) + ".csv"; }

nlohmann::json report_to_json(const RunReport& report) {
  using nlohmann::json;
  json j;
  j["version"] = report.version;
  j["generated_at"] = report.generated_at;
  j["strategy"] = report.strategy;
  j["config"] = report.config;
  json prov = json::array();
  for (const auto& p : report.provenance) {
    prov.push_back({{"provider", p.provider},
                    {"version", p.version},
                    {"retrieved_at", p.retrieved_at},
                    {"request_digest", p.request_digest}});
  }
  j["provenance"] = prov;
  json runs = json::array();
  for (const auto& r : report.runs) {
    runs.push_back({{"series", r.name},
                    {"ledger", ledger_file_name(r.name)},
                    {"test_start", format_timestamp(r.timestamps.front())},
                    {"test_end", format_timestamp(r.timestamps.back())},
                    {"steps", r.rets.size()},
                    {"fees", r.fees},
                    {"metrics", metrics::to_json(r.metrics)}});
  }
  j["runs"] = runs;
  return j;
}

std::vector<fs::path> emit_report(const RunReport& report, const fs::path& dir) {
  fs::create_directories(dir);
  std::vector<fs::path> written;
  auto put = [&](const fs::path& p, std::string_view text) {
    write_file_atomic(p, text);
    written.push_back(p);
  };

  put(dir / "report.json", report_to_json(report).dump(2) + "\n");

  std::string metrics_csv = "series,metric,value\n";
  std::string equity = "timestamp,series,equity\n";
  std::string drawdown = "timestamp,series,drawdown\n";
  for (const auto& r : report.runs) {
    const std::string rows = metrics::to_csv(r.metrics);
    for (const auto& line : split_lines(rows)) {
      if (line.empty() || line.starts_with("metric,")) continue;
      metrics_csv += r.name + "," + std::string(line) + "\n";
    }
    const auto eq = metrics::equity_curve(r.rets);
    const auto dd = metrics::drawdown_curve(r.rets);
    for (std::size_t t = 0; t < r.timestamps.size(); ++t) {
      const std::string ts = format_timestamp(r.timestamps[t]);
      equity += ts + "," + r.name + "," + format_shortest(eq[t]) + "\n";
      drawdown += ts + "," + r.name + "," + format_shortest(dd[t]) + "\n";
    }
    if (r.portfolio_records.empty()) {
      put(dir / ledger_file_name(r.name), envs::ledger_csv(r.records));
    } else {
      put(dir / ledger_file_name(r.name), portfolio_net_ledger(r, report.symbols));
    }
  }
  put(dir / "metrics.csv", metrics_csv);
  put(dir / "equity.csv", equity);
  put(dir / "drawdown.csv", drawdown);

  if (!report.factors.empty()) {
    fs::create_directories(dir / "factors");
    for (const auto& m : report.factors) put(dir / "factors" / (safe_name(m.symbol) + ".csv"), factors::factor_csv(m));
  }
  return written;
}

metrics::MetricReport metrics_from_ledger(std::string_view ledger_bytes, const MetricsConfig& cfg) {
  const auto lines = split_lines(ledger_bytes);
  if (lines.empty()) throw ParseError("ledger: empty file");
  const auto header = split_csv_line(lines[0]);
  const bool net = std::find(header.begin(), header.end(), "net_ret") != header.end();
  std::vector<double> rets;
  if (net) {
    const auto col = static_cast<std::size_t>(std::find(header.begin(), header.end(), "net_ret") - header.begin());
    for (std::size_t i = 1; i < lines.size(); ++i) {
      if (lines[i].empty()) continue;
      const auto f = split_csv_line(lines[i]);
      const auto v = col < f.size() ? parse_double(f[col]) : std::nullopt;
      if (!v) throw ParseError("ledger: row " + std::to_string(i + 1) + " has a bad net_ret");
      rets.push_back(*v);
    }
  } else {
    rets = envs::ledger_returns(ledger_bytes);
  }
  return metrics::compute_trading_report(metrics::ReturnSeries{rets, cfg.periods_per_year, cfg.risk_free}, cfg.names);
}

}  // namespace tradekit::runner
