#include "tradekit/runner/config.hpp"

#include <algorithm>
#include <set>

#include <toml.hpp>

#include "tradekit/core/errors.hpp"
#include "tradekit/core/text.hpp"
#include "tradekit/metrics/report.hpp"

namespace tradekit::runner {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kStrategies[] = {"buy_and_hold", "macd", "threshold", "topk_dropout"};

const std::set<std::string, std::less<>> kTopKeys{"extends", "seed",    "parallel", "data",    "provider", "split",
                                                 "factors", "strategy", "env",      "metrics", "output"};
const std::set<std::string, std::less<>> kDataKeys{"source", "symbols", "interval", "start", "end", "csv_dir", "news"};
const std::set<std::string, std::less<>> kProviderKeys{"name",           "version",         "base_url",
                                                      "api_key",        "max_retries",     "rate_limit",
                                                      "rate_window_ms", "timeout_ms",      "backoff_base_ms",
                                                      "backoff_factor", "backoff_cap_ms",  "full_jitter"};
const std::set<std::string, std::less<>> kSplitKeys{"train_end"};
const std::set<std::string, std::less<>> kFactorKeys{"enabled", "windows", "cache_dir", "standardize"};
const std::set<std::string, std::less<>> kStrategyKeys{"name", "params"};
const std::set<std::string, std::less<>> kEnvKeys{"initial_cash", "fee_rate"};
const std::set<std::string, std::less<>> kMetricsKeys{"names", "periods_per_year", "risk_free"};
const std::set<std::string, std::less<>> kOutputKeys{"dir"};

const std::set<std::string, std::less<>>& params_keys(std::string_view strategy) {
  static const std::set<std::string, std::less<>> none{};
  static const std::set<std::string, std::less<>> macd{"fast", "slow", "signal"};
  static const std::set<std::string, std::less<>> threshold{"tau", "predictions"};
  static const std::set<std::string, std::less<>> topk{"k", "d", "predictions"};
  if (strategy == "macd") return macd;
  if (strategy == "threshold") return threshold;
  if (strategy == "topk_dropout") return topk;
  return none;
}

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ConfigError("config key '" + path + "': " + msg);
}

void check_keys(const toml::table& t, const std::set<std::string, std::less<>>& allowed, const std::string& prefix) {
  for (auto&& [k, v] : t) {
    if (!allowed.contains(k.str())) {
      throw ConfigError("unknown config key '" + (prefix.empty() ? "" : prefix + ".") + std::string(k.str()) + "'");
    }
  }
}

const toml::table* sub_table(const toml::table& t, std::string_view key, const std::string& path) {
  const toml::node* n = t.get(key);
  if (!n) return nullptr;
  if (!n->is_table()) fail(path, "expected a table");
  return n->as_table();
}

std::optional<std::string> get_string(const toml::table& t, std::string_view key, const std::string& path) {
  const toml::node* n = t.get(key);
  if (!n) return std::nullopt;
  if (!n->is_string()) fail(path, "expected a string");
  return n->value<std::string>();
}

std::optional<double> get_double(const toml::table& t, std::string_view key, const std::string& path) {
  const toml::node* n = t.get(key);
  if (!n) return std::nullopt;
  if (!n->is_number()) fail(path, "expected a number");
  return n->value<double>();
}

std::optional<std::int64_t> get_int(const toml::table& t, std::string_view key, const std::string& path) {
  const toml::node* n = t.get(key);
  if (!n) return std::nullopt;
  if (!n->is_integer()) fail(path, "expected an integer");
  return n->value<std::int64_t>();
}

std::optional<bool> get_bool(const toml::table& t, std::string_view key, const std::string& path) {
  const toml::node* n = t.get(key);
  if (!n) return std::nullopt;
  if (!n->is_boolean()) fail(path, "expected true or false");
  return n->value<bool>();
}

std::optional<Timestamp> get_time(const toml::table& t, std::string_view key, const std::string& path) {
  const toml::node* n = t.get(key);
  if (!n) return std::nullopt;
  if (const auto* d = n->as_date()) {
    const toml::date v = d->get();
    return make_date(v.year, v.month, v.day);
  }
  if (!n->is_string()) fail(path, "expected a date");
  try {
    return parse_timestamp(*n->value<std::string>());
  } catch (const ParseError& e) {
    fail(path, e.what());
  }
}

std::vector<std::string> get_strings(const toml::table& t, std::string_view key, const std::string& path) {
  const toml::node* n = t.get(key);
  if (!n) return {};
  const toml::array* arr = n->as_array();
  if (!arr) fail(path, "expected an array of strings");
  std::vector<std::string> out;
  for (const auto& e : *arr) {
    if (!e.is_string()) fail(path, "expected an array of strings");
    out.push_back(*e.value<std::string>());
  }
  return out;
}

std::int64_t positive_int(std::int64_t v, const std::string& path) {
  if (v < 1) fail(path, "must be >= 1");
  return v;
}

// Path-valued keys are made absolute against the directory of the file that
// sets them, before any merging.
void absolutize(toml::table& root, const fs::path& dir) {
  const std::pair<std::string_view, std::string_view> keys[] = {{"data", "csv_dir"},
                                                               {"data", "news"},
                                                               {"factors", "cache_dir"},
                                                               {"output", "dir"}};
  auto fix = [&](toml::table& t, std::string_view key) {
    if (auto* s = t.get_as<std::string>(key)) {
      const fs::path p(s->get());
      if (p.is_relative()) *s = (dir / p).lexically_normal().string();
    }
  };
  for (const auto& [section, key] : keys) {
    if (auto* t = root.get_as<toml::table>(section)) fix(*t, key);
  }
  if (auto* s = root.get_as<toml::table>("strategy")) {
    if (auto* p = s->get_as<toml::table>("params")) fix(*p, "predictions");
  }
}

void merge_into(toml::table& base, const toml::table& over) {
  for (auto&& [k, v] : over) {
    auto* bt = base.get_as<toml::table>(k.str());
    if (bt && v.is_table()) {
      merge_into(*bt, *v.as_table());
    } else {
      base.insert_or_assign(k, v);
    }
  }
}

toml::table parse_text(std::string_view text, const std::string& source) {
  try {
    return toml::parse(text, source);
  } catch (const toml::parse_error& e) {
    throw ConfigError("config " + source + " line " + std::to_string(e.source().begin.line) + ": " +
                      std::string(e.description()));
  }
}

toml::table resolve(toml::table t, const fs::path& dir, std::vector<fs::path>& chain);

toml::table load_file(const fs::path& path, std::vector<fs::path>& chain) {
  if (!fs::exists(path)) throw ConfigError("config file not found: " + path.string());
  const fs::path canon = fs::weakly_canonical(path);
  if (std::find(chain.begin(), chain.end(), canon) != chain.end()) {
    throw ConfigError("config extends cycle at " + path.string());
  }
  chain.push_back(canon);
  toml::table t = parse_text(read_file(path), path.string());
  return resolve(std::move(t), canon.parent_path(), chain);
}

toml::table resolve(toml::table t, const fs::path& dir, std::vector<fs::path>& chain) {
  absolutize(t, dir);
  const toml::node* ext = t.get("extends");
  if (!ext) return t;
  if (!ext->is_string()) fail("extends", "expected a path string");
  const fs::path base_path = dir / *ext->value<std::string>();
  t.erase("extends");
  toml::table base = load_file(base_path, chain);
  merge_into(base, t);
  return base;
}

RunConfig build(const toml::table& root, const fs::path& base_dir) {
  check_keys(root, kTopKeys, "");
  RunConfig cfg;
  cfg.output_dir = base_dir / "out";

  if (auto v = get_int(root, "seed", "seed")) {
    if (*v < 0) fail("seed", "must be >= 0");
    cfg.seed = static_cast<std::uint64_t>(*v);
  }
  if (auto v = get_bool(root, "parallel", "parallel")) cfg.parallel = *v;

  const toml::table* data = sub_table(root, "data", "data");
  if (!data) throw ConfigError("config is missing the [data] table");
  check_keys(*data, kDataKeys, "data");
  if (auto v = get_string(*data, "source", "data.source")) cfg.data.source = *v;
  if (cfg.data.source != "csv" && cfg.data.source != "provider") fail("data.source", "must be csv or provider");
  cfg.data.symbols = get_strings(*data, "symbols", "data.symbols");
  if (cfg.data.symbols.empty()) fail("data.symbols", "at least one symbol is required");
  {
    std::set<std::string> seen;
    for (const auto& s : cfg.data.symbols) {
      if (s.empty()) fail("data.symbols", "empty symbol");
      if (!seen.insert(s).second) fail("data.symbols", "duplicate symbol " + s);
    }
  }
  if (auto v = get_string(*data, "interval", "data.interval")) cfg.data.interval = *v;
  try {
    ingest::parse_interval(cfg.data.interval);
  } catch (const ConfigError& e) {
    fail("data.interval", e.what());
  }
  cfg.data.start = get_time(*data, "start", "data.start");
  cfg.data.end = get_time(*data, "end", "data.end");
  if (auto v = get_string(*data, "csv_dir", "data.csv_dir")) cfg.data.csv_dir = *v;
  else cfg.data.csv_dir = base_dir;
  if (auto v = get_string(*data, "news", "data.news")) cfg.data.news = fs::path(*v);
  if (cfg.data.source == "provider" && !(cfg.data.start && cfg.data.end)) {
    fail("data", "provider source needs start and end");
  }

  if (const toml::table* p = sub_table(root, "provider", "provider")) {
    check_keys(*p, kProviderKeys, "provider");
    auto& pc = cfg.provider;
    if (auto v = get_string(*p, "name", "provider.name")) pc.provider = *v;
    if (auto v = get_string(*p, "version", "provider.version")) pc.version = *v;
    if (auto v = get_string(*p, "base_url", "provider.base_url")) pc.base_url = *v;
    if (auto v = get_string(*p, "api_key", "provider.api_key")) pc.api_key = *v;
    if (auto v = get_int(*p, "max_retries", "provider.max_retries")) {
      if (*v < 0) fail("provider.max_retries", "must be >= 0");
      pc.max_retries = static_cast<int>(*v);
    }
    if (auto v = get_int(*p, "rate_limit", "provider.rate_limit")) {
      pc.rate_limit = static_cast<int>(positive_int(*v, "provider.rate_limit"));
    }
    if (auto v = get_int(*p, "rate_window_ms", "provider.rate_window_ms")) {
      pc.rate_window = std::chrono::milliseconds(positive_int(*v, "provider.rate_window_ms"));
    }
    if (auto v = get_int(*p, "timeout_ms", "provider.timeout_ms")) {
      pc.timeout = std::chrono::milliseconds(positive_int(*v, "provider.timeout_ms"));
    }
    if (auto v = get_int(*p, "backoff_base_ms", "provider.backoff_base_ms")) {
      pc.backoff.base = std::chrono::milliseconds(positive_int(*v, "provider.backoff_base_ms"));
    }
    if (auto v = get_double(*p, "backoff_factor", "provider.backoff_factor")) {
      if (!(*v >= 1.0)) fail("provider.backoff_factor", "must be >= 1");
      pc.backoff.factor = *v;
    }
    if (auto v = get_int(*p, "backoff_cap_ms", "provider.backoff_cap_ms")) {
      pc.backoff.cap = std::chrono::milliseconds(positive_int(*v, "provider.backoff_cap_ms"));
    }
    if (auto v = get_bool(*p, "full_jitter", "provider.full_jitter")) pc.backoff.full_jitter = *v;
  }
  if (cfg.data.source == "provider" && cfg.provider.base_url.empty()) {
    fail("provider.base_url", "required when data.source = \"provider\"");
  }

  const toml::table* split = sub_table(root, "split", "split");
  if (!split) throw ConfigError("config is missing the [split] table");
  check_keys(*split, kSplitKeys, "split");
  const auto train_end = get_time(*split, "train_end", "split.train_end");
  if (!train_end) fail("split.train_end", "required");
  cfg.train_end = *train_end;
  if (cfg.data.start && !(*cfg.data.start < cfg.train_end)) fail("split.train_end", "must fall after data.start");
  if (cfg.data.end && !(cfg.train_end <= *cfg.data.end)) fail("split.train_end", "must not fall after data.end");
  if (cfg.data.start && cfg.data.end && !(*cfg.data.start < *cfg.data.end)) fail("data.end", "must follow data.start");

  if (const toml::table* f = sub_table(root, "factors", "factors")) {
    check_keys(*f, kFactorKeys, "factors");
    if (auto v = get_bool(*f, "enabled", "factors.enabled")) cfg.factors.enabled = *v;
    if (const toml::node* w = f->get("windows")) {
      const toml::array* arr = w->as_array();
      if (!arr || arr->empty()) fail("factors.windows", "expected a non-empty array of integers");
      cfg.factors.windows.clear();
      for (const auto& e : *arr) {
        if (!e.is_integer()) fail("factors.windows", "expected integers");
        cfg.factors.windows.push_back(static_cast<int>(positive_int(*e.value<std::int64_t>(), "factors.windows")));
      }
    }
    if (auto v = get_string(*f, "cache_dir", "factors.cache_dir")) cfg.factors.cache_dir = fs::path(*v);
    if (auto v = get_bool(*f, "standardize", "factors.standardize")) cfg.factors.standardize = *v;
  }

  const toml::table* strat = sub_table(root, "strategy", "strategy");
  if (!strat) throw ConfigError("config is missing the [strategy] table");
  check_keys(*strat, kStrategyKeys, "strategy");
  const auto name = get_string(*strat, "name", "strategy.name");
  if (!name) fail("strategy.name", "required");
  if (std::find(std::begin(kStrategies), std::end(kStrategies), *name) == std::end(kStrategies)) {
    fail("strategy.name", "unknown strategy '" + *name + "'");
  }
  cfg.strategy.name = *name;
  static const toml::table empty;
  const toml::table* params = sub_table(*strat, "params", "strategy.params");
  if (!params) params = &empty;
  check_keys(*params, params_keys(*name), "strategy.params");
  if (*name == "macd") {
    if (auto v = get_int(*params, "fast", "strategy.params.fast")) cfg.strategy.macd.fast = static_cast<std::size_t>(positive_int(*v, "strategy.params.fast"));
    if (auto v = get_int(*params, "slow", "strategy.params.slow")) cfg.strategy.macd.slow = static_cast<std::size_t>(positive_int(*v, "strategy.params.slow"));
    if (auto v = get_int(*params, "signal", "strategy.params.signal")) cfg.strategy.macd.signal = static_cast<std::size_t>(positive_int(*v, "strategy.params.signal"));
    try {
      cfg.strategy.macd.validate();
    } catch (const Error& e) {
      fail("strategy.params", e.what());
    }
  }
  if (*name == "threshold" || *name == "topk_dropout") {
    const auto pred = get_string(*params, "predictions", "strategy.params.predictions");
    if (!pred) fail("strategy.params.predictions", "required for " + *name);
    cfg.strategy.predictions = fs::path(*pred);
  }
  if (*name == "threshold") {
    if (auto v = get_double(*params, "tau", "strategy.params.tau")) {
      if (!(*v >= 0.0)) fail("strategy.params.tau", "must be >= 0");
      cfg.strategy.tau = *v;
    }
  }
  if (*name == "topk_dropout") {
    const auto k = get_int(*params, "k", "strategy.params.k");
    const auto d = get_int(*params, "d", "strategy.params.d");
    if (!k) fail("strategy.params.k", "required for topk_dropout");
    if (!d) fail("strategy.params.d", "required for topk_dropout");
    cfg.strategy.topk.k = static_cast<std::size_t>(positive_int(*k, "strategy.params.k"));
    cfg.strategy.topk.d = static_cast<std::size_t>(positive_int(*d, "strategy.params.d"));
    try {
      cfg.strategy.topk.validate(cfg.data.symbols.size());
    } catch (const Error& e) {
      fail("strategy.params", e.what());
    }
  }

  if (const toml::table* e = sub_table(root, "env", "env")) {
    check_keys(*e, kEnvKeys, "env");
    if (auto v = get_double(*e, "initial_cash", "env.initial_cash")) cfg.env.initial_cash = *v;
    if (auto v = get_double(*e, "fee_rate", "env.fee_rate")) cfg.env.fee_rate = *v;
  }
  if (!(cfg.env.initial_cash > 0.0)) fail("env.initial_cash", "must be > 0");
  if (!(cfg.env.fee_rate >= 0.0 && cfg.env.fee_rate < 1.0)) fail("env.fee_rate", "must lie in [0, 1)");

  const bool minute = ingest::parse_interval(cfg.data.interval) == ingest::Interval::kMinute;
  cfg.metrics.periods_per_year = minute ? 252.0 * 390.0 : 252.0;
  if (const toml::table* m = sub_table(root, "metrics", "metrics")) {
    check_keys(*m, kMetricsKeys, "metrics");
    cfg.metrics.names = get_strings(*m, "names", "metrics.names");
    for (const auto& n : cfg.metrics.names) {
      if (!metrics::is_known_metric(n)) fail("metrics.names", "unknown metric '" + n + "'");
    }
    if (auto v = get_double(*m, "periods_per_year", "metrics.periods_per_year")) {
      if (!(*v > 0.0)) fail("metrics.periods_per_year", "must be > 0");
      cfg.metrics.periods_per_year = *v;
    }
    if (auto v = get_double(*m, "risk_free", "metrics.risk_free")) cfg.metrics.risk_free = *v;
  }

  if (const toml::table* o = sub_table(root, "output", "output")) {
    check_keys(*o, kOutputKeys, "output");
    if (auto v = get_string(*o, "dir", "output.dir")) cfg.output_dir = *v;
  }
  return cfg;
}

}  // namespace

std::vector<std::string_view> strategy_registry() { return {std::begin(kStrategies), std::end(kStrategies)}; }

RunConfig load_config(const fs::path& path) {
  std::vector<fs::path> chain;
  const toml::table t = load_file(path, chain);
  return build(t, fs::weakly_canonical(path).parent_path());
}

RunConfig parse_config(std::string_view text, const fs::path& base_dir) {
  std::vector<fs::path> chain;
  return build(resolve(parse_text(text, "<string>"), base_dir, chain), base_dir);
}

nlohmann::json config_to_json(const RunConfig& cfg) {
  using nlohmann::json;
  auto opt_time = [](const std::optional<Timestamp>& t) { return t ? json(format_timestamp(*t)) : json(nullptr); };
  auto opt_path = [](const std::optional<fs::path>& p) { return p ? json(p->generic_string()) : json(nullptr); };
  json j;
  j["seed"] = cfg.seed;
  j["parallel"] = cfg.parallel;
  j["data"] = {{"source", cfg.data.source},
               {"symbols", cfg.data.symbols},
               {"interval", cfg.data.interval},
               {"start", opt_time(cfg.data.start)},
               {"end", opt_time(cfg.data.end)},
               {"csv_dir", cfg.data.csv_dir.generic_string()},
               {"news", opt_path(cfg.data.news)}};
  if (cfg.data.source == "provider") {
    j["provider"] = {{"name", cfg.provider.provider},
                     {"version", cfg.provider.version},
                     {"base_url", cfg.provider.base_url},
                     {"max_retries", cfg.provider.max_retries},
                     {"rate_limit", cfg.provider.rate_limit},
                     {"rate_window_ms", cfg.provider.rate_window.count()}};
  }
  j["split"] = {{"train_end", format_timestamp(cfg.train_end)}};
  j["factors"] = {{"enabled", cfg.factors.enabled},
                  {"windows", cfg.factors.windows},
                  {"cache_dir", opt_path(cfg.factors.cache_dir)},
                  {"standardize", cfg.factors.standardize}};
  json params = json::object();
  if (cfg.strategy.name == "macd") {
    params = {{"fast", cfg.strategy.macd.fast}, {"slow", cfg.strategy.macd.slow}, {"signal", cfg.strategy.macd.signal}};
  } else if (cfg.strategy.name == "threshold") {
    params = {{"tau", cfg.strategy.tau}, {"predictions", opt_path(cfg.strategy.predictions)}};
  } else if (cfg.strategy.name == "topk_dropout") {
    params = {{"k", cfg.strategy.topk.k}, {"d", cfg.strategy.topk.d}, {"predictions", opt_path(cfg.strategy.predictions)}};
  }
  j["strategy"] = {{"name", cfg.strategy.name}, {"params", params}};
  j["env"] = {{"initial_cash", cfg.env.initial_cash}, {"fee_rate", cfg.env.fee_rate}};
  j["metrics"] = {{"names", cfg.metrics.names},
                  {"periods_per_year", cfg.metrics.periods_per_year},
                  {"risk_free", cfg.metrics.risk_free}};
  j["output"] = {{"dir", cfg.output_dir.generic_string()}};
  return j;
}

}  // namespace tradekit::runner
