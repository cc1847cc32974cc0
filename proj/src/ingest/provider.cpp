#include "tradekit/ingest/provider.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <httplib.h>
#include <nlohmann/json.hpp>
#include <random>
#include <thread>

#include "tradekit/core/digest.hpp"
#include "tradekit/core/errors.hpp"
#include "tradekit/core/text.hpp"

namespace tradekit::ingest {

RateLimiter::RateLimiter(int max_requests, Clock::duration window)
    : max_requests_(max_requests), window_(window) {
  if (max_requests <= 0) throw ConfigError("rate_limit must be > 0");
  if (window <= Clock::duration::zero()) throw ConfigError("rate window must be positive");
}

RateLimiter::Permit RateLimiter::acquire() {
  std::unique_lock lock(mu_);
  for (;;) {
    const auto now = Clock::now();
    std::erase_if(slots_, [&](const Slot& s) { return s.done && now - *s.done >= window_; });
    if (static_cast<int>(slots_.size()) < max_requests_) {
      slots_.push_back({next_id_, std::nullopt});
      return Permit(this, next_id_++);
    }
    std::optional<Clock::time_point> wake;
    for (const auto& s : slots_) {
      if (s.done && (!wake || *s.done + window_ < *wake)) wake = *s.done + window_;
    }
    if (wake) {
      cv_.wait_until(lock, *wake);
    } else {
      cv_.wait(lock);
    }
  }
}

void RateLimiter::release(std::uint64_t id) {
  {
    std::lock_guard lock(mu_);
    for (auto& s : slots_) {
      if (s.id == id) s.done = Clock::now();
    }
  }
  cv_.notify_all();
}

std::chrono::milliseconds BackoffPolicy::delay(int retry, std::uint64_t jitter_seed) const {
  const double ceiling =
      std::min(static_cast<double>(cap.count()), static_cast<double>(base.count()) * std::pow(factor, retry - 1));
  if (!full_jitter) return std::chrono::milliseconds(static_cast<long long>(ceiling));
  std::mt19937_64 rng(jitter_seed + static_cast<std::uint64_t>(retry));
  std::uniform_real_distribution<double> u(0.0, ceiling);
  return std::chrono::milliseconds(static_cast<long long>(u(rng)));
}

std::string to_string(Interval interval) { return interval == Interval::kDaily ? "daily" : "minute"; }

Interval parse_interval(std::string_view text) {
  const std::string t = to_lower(trim(text));
  if (t == "daily" || t == "1d" || t == "day") return Interval::kDaily;
  if (t == "minute" || t == "1m" || t == "1min") return Interval::kMinute;
  throw ConfigError("unsupported interval '" + std::string(text) + "'");
}

AssetSeries decode_bars_payload(std::string_view body, const std::string& symbol) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(body);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("provider payload for " + symbol + " is not JSON: " + e.what());
  }
  if (!doc.is_array()) throw ParseError("provider payload for " + symbol + " is not a JSON array");

  auto number = [&](const nlohmann::json& rec, const char* key, std::size_t i) -> double {
    const auto it = rec.find(key);
    if (it != rec.end()) {
      if (it->is_number()) return it->get<double>();
      if (it->is_string()) {
        if (auto v = parse_double(it->get<std::string>())) return *v;
      }
    }
    throw ParseError("provider payload for " + symbol + ": record " + std::to_string(i) + " has bad field '" +
                     key + "'");
  };

  std::vector<Bar> bars;
  bars.reserve(doc.size());
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& rec = doc[i];
    if (!rec.is_object()) throw ParseError("provider payload for " + symbol + ": record " + std::to_string(i) + " is not an object");
    const auto ts = rec.find("timestamp");
    if (ts == rec.end() || !ts->is_string()) {
      throw ParseError("provider payload for " + symbol + ": record " + std::to_string(i) + " lacks timestamp");
    }
    Bar b;
    b.timestamp = parse_timestamp(ts->get<std::string>());
    b.open = number(rec, "open", i);
    b.high = number(rec, "high", i);
    b.low = number(rec, "low", i);
    b.close = number(rec, "close", i);
    b.volume = number(rec, "volume", i);
    if (rec.contains("adjusted_close") && !rec["adjusted_close"].is_null()) {
      b.adjusted_close = number(rec, "adjusted_close", i);
    }
    bars.push_back(b);
  }
  std::stable_sort(bars.begin(), bars.end(), [](const Bar& a, const Bar& b) { return a.timestamp < b.timestamp; });
  for (std::size_t i = 1; i < bars.size(); ++i) {
    if (bars[i].timestamp == bars[i - 1].timestamp) {
      throw ParseError("provider payload for " + symbol + ": duplicate timestamp " +
                       format_timestamp(bars[i].timestamp));
    }
  }
  return AssetSeries(symbol, std::move(bars));
}

namespace {

struct UrlParts {
  std::string scheme_host_port;
  std::string path_prefix;
};

UrlParts split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw ConfigError("provider base_url lacks a scheme: " + url);
  const auto path_start = url.find('/', scheme_end + 3);
  UrlParts parts;
  parts.scheme_host_port = url.substr(0, path_start);
  parts.path_prefix = path_start == std::string::npos ? "" : url.substr(path_start);
  while (!parts.path_prefix.empty() && parts.path_prefix.back() == '/') parts.path_prefix.pop_back();
  return parts;
}

bool transient_status(int status) { return status == 429 || (status >= 500 && status <= 599); }

std::string now_iso() {
  return format_datetime(std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now()));
}

}  // namespace

FetchResult fetch_bars(const ProviderConfig& config, RateLimiter& limiter, const std::string& symbol,
                       Interval interval, Timestamp start, Timestamp end) {
  if (end < start) throw DataError("fetch_bars: start after end");
  if (config.max_retries < 0) throw ConfigError("max_retries must be >= 0");

  const UrlParts url = split_url(config.base_url);
  const std::string start_s = format_timestamp(start);
  const std::string end_s = format_timestamp(end);
  const std::string path = url.path_prefix + "/bars?" +
                           httplib::detail::params_to_query_str({{"symbol", symbol},
                                                                 {"interval", to_string(interval)},
                                                                 {"start", start_s},
                                                                 {"end", end_s}});
  const std::string digest =
      sha256_hex(config.provider + "|" + symbol + "|" + to_string(interval) + "|" + start_s + "|" + end_s);
  const std::uint64_t jitter_seed = std::stoull(digest.substr(0, 16), nullptr, 16);

  std::string api_key = config.api_key;
  if (const char* env = std::getenv(kApiKeyEnvVar); env && *env) api_key = env;

  httplib::Client client(url.scheme_host_port);
  const auto timeout_us = std::chrono::duration_cast<std::chrono::microseconds>(config.timeout);
  client.set_connection_timeout(timeout_us);
  client.set_read_timeout(timeout_us);
  client.set_write_timeout(timeout_us);
  const httplib::Headers headers = {{kApiKeyHeader, api_key}};

  int last_status = 0;
  std::string last_reason;
  const int max_attempts = config.max_retries + 1;
  for (int attempt = 1; attempt <= max_attempts; ++attempt) {
    if (attempt > 1) std::this_thread::sleep_for(config.backoff.delay(attempt - 1, jitter_seed));
    const auto res = [&] {
      const auto permit = limiter.acquire();
      return client.Get(path, headers);
    }();
    if (!res) {
      last_status = 0;
      last_reason = httplib::to_string(res.error());
      continue;
    }
    last_status = res->status;
    if (res->status == 200) {
      AssetSeries all = decode_bars_payload(res->body, symbol);
      std::vector<Bar> kept;
      for (const Bar& b : all.bars()) {
        if (b.timestamp >= start && b.timestamp <= end) kept.push_back(b);
      }
      return FetchResult{AssetSeries(symbol, std::move(kept)),
                         Provenance{config.provider, config.version, now_iso(), digest}, attempt};
    }
    last_reason = "HTTP " + std::to_string(res->status);
    if (!transient_status(res->status)) {
      throw FetchError("fetch " + symbol + ": non-retryable " + last_reason, res->status, attempt);
    }
  }
  throw FetchError("fetch " + symbol + ": gave up after " + std::to_string(max_attempts) + " attempts (" +
                       last_reason + ")",
                   last_status, max_attempts);
}

}  // namespace tradekit::ingest
