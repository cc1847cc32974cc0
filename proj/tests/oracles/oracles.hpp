#pragma once

// Brute-force references for the test suite. Nothing here may include a
// header outside tradekit/core; the point is to disagree with the library
// when the library is wrong.

#include <atomic>
#include <chrono>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "tradekit/core/types.hpp"

namespace oracle {

using Cell = std::optional<double>;
using NaiveColumn = std::vector<Cell>;

// Literal per-window evaluation of one Alpha158 column ("kmid", "roc_5",
// "logvol", ...). Throws std::invalid_argument on an unknown name.
NaiveColumn naive_column(const tradekit::AssetSeries& series, const std::string& name);

// Column names in canonical order for a window list.
std::vector<std::string> naive_column_names(const std::vector<int>& windows);

// max over s <= t of (V_s - V_t) / V_s.
double brute_mdd(const std::vector<double>& values);

// Values path V_0 = 1, V_t = V_{t-1} (1 + r_t); length rets.size() + 1.
std::vector<double> values_from_rets(const std::vector<double>& rets);

std::vector<double> naive_average_ranks(const std::vector<double>& x);

// Pearson by two direct passes; nullopt when either side has zero spread.
std::optional<double> naive_pearson(const std::vector<double>& a, const std::vector<double>& b);

std::optional<double> brute_spearman(const std::vector<double>& a, const std::vector<double>& b);

double naive_mean(const std::vector<double>& x);
double naive_pop_std(const std::vector<double>& x);

// First-value-seeded EMA and the sign-change scan of dif - dea.
std::vector<double> naive_ema(const std::vector<double>& x, std::size_t span);
std::vector<int> brute_macd_crossings(const std::vector<double>& close, std::size_t fast, std::size_t slow,
                                      std::size_t signal);

// Synthetic OHLCV paths. Same spec, same bytes.
enum class PathKind { kConstant, kLinear, kTent, kGeometricRandom };

struct SyntheticPathSpec {
  PathKind kind = PathKind::kGeometricRandom;
  std::size_t length = 200;
  std::uint64_t seed = 1;
  double start = 100.0;
  double step = 1.0;     // linear / tent increment
  double drift = 0.0002; // geometric, per bar
  double vol = 0.02;     // geometric, per bar
  std::string symbol = "SYN";
};

tradekit::AssetSeries make_path(const SyntheticPathSpec& spec);

// Loopback HTTP server that answers every GET with the next scripted reply.
struct ScriptedReply {
  int status = 200;
  std::string body;
  std::chrono::milliseconds delay{0};
};

struct RequestLog {
  std::chrono::steady_clock::time_point at;
  std::string path;
  std::string api_key;
};

class MockProvider {
 public:
  explicit MockProvider(std::vector<ScriptedReply> script);
  ~MockProvider();
  MockProvider(const MockProvider&) = delete;
  MockProvider& operator=(const MockProvider&) = delete;

  std::string base_url() const;
  std::vector<RequestLog> transcript() const;
  std::size_t request_count() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// JSON body in the provider wire format for a bar series.
std::string bars_body(const tradekit::AssetSeries& series);

// Largest number of transcript requests inside any half-open span of `window`.
std::size_t max_requests_in_window(const std::vector<RequestLog>& log, std::chrono::steady_clock::duration window);

}  // namespace oracle
