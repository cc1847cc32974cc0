#pragma once

#include <chrono>
#include <cstdint>
#include <condition_variable>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tradekit/core/types.hpp"

namespace tradekit::ingest {

/// Sliding-window request limiter: at most `max_requests` requests in any
/// interval of length `window`. A slot is held while its request is in
/// flight and its window starts when the request completes, so spacing
/// holds as seen by the server too. Safe to share between threads.
class RateLimiter {
 public:
  using Clock = std::chrono::steady_clock;

  /// Held for the duration of one request; releases its slot on destruction.
  class Permit {
   public:
    Permit(Permit&& other) noexcept : owner_(std::exchange(other.owner_, nullptr)), id_(other.id_) {}
    Permit& operator=(Permit&&) = delete;
    ~Permit() {
      if (owner_) owner_->release(id_);
    }

   private:
    friend class RateLimiter;
    Permit(RateLimiter* owner, std::uint64_t id) : owner_(owner), id_(id) {}
    RateLimiter* owner_;
    std::uint64_t id_;
  };

  RateLimiter(int max_requests, Clock::duration window);

  /// Blocks until a request slot is free, then claims it.
  [[nodiscard]] Permit acquire();

  int max_requests() const noexcept { return max_requests_; }
  Clock::duration window() const noexcept { return window_; }

 private:
  struct Slot {
    std::uint64_t id;
    std::optional<Clock::time_point> done;  // empty while in flight
  };

  void release(std::uint64_t id);

  int max_requests_;
  Clock::duration window_;
  std::mutex mu_;
  std::condition_variable cv_;
  std::vector<Slot> slots_;
  std::uint64_t next_id_ = 0;
};

struct BackoffPolicy {
  std::chrono::milliseconds base{100};
  double factor = 2.0;
  std::chrono::milliseconds cap{10'000};
  bool full_jitter = true;

  /// Delay before retry number `retry` (1-based).
  std::chrono::milliseconds delay(int retry, std::uint64_t jitter_seed) const;
};

struct ProviderConfig {
  std::string provider = "fmp";
  std::string version = "v1";
  std::string base_url;
  std::string api_key;
  int max_retries = 3;
  BackoffPolicy backoff;
  int rate_limit = 5;  // requests per rate_window
  std::chrono::milliseconds rate_window{1000};
  std::chrono::milliseconds timeout{10'000};
};

inline constexpr const char* kApiKeyEnvVar = "TRADEKIT_API_KEY";
inline constexpr const char* kApiKeyHeader = "X-Api-Key";

struct Provenance {
  std::string provider;
  std::string version;
  std::string retrieved_at;
  std::string request_digest;
};

enum class Interval { kDaily, kMinute };

std::string to_string(Interval interval);
Interval parse_interval(std::string_view text);

struct FetchResult {
  AssetSeries series;
  Provenance provenance;
  int attempts = 0;
};

/// GET {base_url}/bars?symbol=&interval=&start=&end= with the api key header.
/// 5xx, 429 and transport failures are retried up to max_retries times with
/// the configured backoff; other 4xx fail immediately. Every attempt goes
/// through `limiter`. Throws FetchError (transport/status) or ParseError
/// (payload). The api key comes from TRADEKIT_API_KEY when set, else config.
FetchResult fetch_bars(const ProviderConfig& config, RateLimiter& limiter, const std::string& symbol,
                       Interval interval, Timestamp start, Timestamp end);

/// Decodes the provider body: a JSON array of bar objects keyed by the CSV
/// column names.
AssetSeries decode_bars_payload(std::string_view body, const std::string& symbol);

}  // namespace tradekit::ingest
