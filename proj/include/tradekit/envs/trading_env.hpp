#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tradekit/core/types.hpp"

namespace tradekit::envs {

inline constexpr double kDefaultInitialCash = 1e5;
inline constexpr double kDefaultFeeRate = 1e-4;

enum class Action { kBuy, kHold, kSell };

std::string_view to_string(Action a);
/// Exact upper-case BUY / HOLD / SELL.
std::optional<Action> parse_action(std::string_view text);

struct TradingEnvConfig {
  AssetSeries series;
  double initial_cash = kDefaultInitialCash;
  double fee_rate = kDefaultFeeRate;  // lambda
  std::size_t start_index = 0;        // first decision bar
  std::string display_name;           // used by the prompt header
  std::optional<FeatureMatrix> factors;
  std::vector<NewsItem> news;

  /// Throws ConfigError / DataError on broken invariants.
  void validate() const;
};

/// Account state before the decision at bar t.
struct TradingState {
  std::size_t t = 0;
  double cash = 0.0;
  double position = 0.0;  // shares, fractional
  double fees = 0.0;      // cumulative

  bool operator==(const TradingState&) const = default;
};

/// One ledger row. cash and position are after the action at `timestamp`;
/// post_value marks them at the next bar's price.
struct StepRecord {
  Timestamp timestamp{};
  double open = 0.0;
  double high = 0.0;
  double low = 0.0;
  double close = 0.0;
  double volume = 0.0;
  double price = 0.0;
  double cash = 0.0;
  double position = 0.0;
  double pre_value = 0.0;
  Action action = Action::kHold;
  double post_value = 0.0;
  double ret = 0.0;

  bool operator==(const StepRecord&) const = default;
};

struct StepResult {
  TradingState state;
  StepRecord record;
  double reward = 0.0;
};

TradingState trading_reset(const TradingEnvConfig& config);

/// All-in/all-out execution at the decision bar's price with fee
/// lambda * |delta position| * price, then marks at the next bar.
/// BUY without cash and SELL without position act as HOLD.
/// Throws DataError when t is the last bar.
StepResult trading_step(const TradingEnvConfig& config, const TradingState& state, Action action);

/// Bars left to decide on from `state`.
std::size_t remaining_steps(const TradingEnvConfig& config, const TradingState& state);

/// (last post_value - first pre_value) / first pre_value.
double episode_return(std::span<const StepRecord> records);

/// Stateful wrapper. Not safe to share while stepping; copies are
/// independent branches over the same immutable config.
class TradingEnv {
 public:
  explicit TradingEnv(TradingEnvConfig config);

  const TradingState& reset();
  StepResult step(Action action);

  const TradingState& state() const noexcept { return state_; }
  const TradingEnvConfig& config() const noexcept { return *config_; }
  bool done() const { return remaining_steps(*config_, state_) == 0; }
  std::span<const StepRecord> records() const noexcept { return records_; }

 private:
  std::shared_ptr<const TradingEnvConfig> config_;
  TradingState state_;
  std::vector<StepRecord> records_;
};

}  // namespace tradekit::envs
