#include "tradekit/envs/trading_env.hpp"

#include <cmath>

#include "tradekit/core/errors.hpp"
#include "tradekit/core/validation.hpp"

namespace tradekit::envs {

std::string_view to_string(Action a) {
  switch (a) {
    case Action::kBuy: return "BUY";
    case Action::kHold: return "HOLD";
    case Action::kSell: return "SELL";
  }
  return "HOLD";
}

std::optional<Action> parse_action(std::string_view text) {
  if (text == "BUY") return Action::kBuy;
  if (text == "HOLD") return Action::kHold;
  if (text == "SELL") return Action::kSell;
  return std::nullopt;
}

void TradingEnvConfig::validate() const {
  if (!(initial_cash > 0.0) || !std::isfinite(initial_cash)) throw ConfigError("initial_cash must be > 0");
  if (!(fee_rate >= 0.0 && fee_rate < 1.0)) throw ConfigError("fee_rate must lie in [0, 1)");
  if (series.size() < 2) throw DataError("trading env for " + series.symbol() + ": needs at least 2 bars");
  if (start_index + 1 >= series.size()) {
    throw DataError("trading env for " + series.symbol() + ": start index leaves no bar to step into");
  }
  for (const Bar& b : series.bars()) {
    if (auto v = check_bar(b)) {
      throw ValidationError("trading env for " + series.symbol() + ": invalid " + v->field + " at " +
                            format_timestamp(v->timestamp));
    }
  }
}

TradingState trading_reset(const TradingEnvConfig& config) {
  config.validate();
  return TradingState{config.start_index, config.initial_cash, 0.0, 0.0};
}

std::size_t remaining_steps(const TradingEnvConfig& config, const TradingState& state) {
  const std::size_t n = config.series.size();
  return state.t + 1 < n ? n - 1 - state.t : 0;
}

StepResult trading_step(const TradingEnvConfig& config, const TradingState& state, Action action) {
  if (state.t + 1 >= config.series.size()) {
    throw DataError("trading env for " + config.series.symbol() + ": step past end of window");
  }
  const Bar& bar = config.series[state.t];
  const double price = bar.price();
  const double lambda = config.fee_rate;

  StepResult out;
  TradingState& next = out.state;
  next = state;
  const double pre_value = state.cash + state.position * price;

  double delta = 0.0;
  if (action == Action::kBuy && state.cash > 0.0) {
    delta = state.cash / (price * (1.0 + lambda));
    next.position = state.position + delta;
    next.cash = 0.0;
  } else if (action == Action::kSell && state.position > 0.0) {
    delta = -state.position;
    next.cash = state.cash + state.position * price * (1.0 - lambda);
    next.position = 0.0;
  }
  next.fees = state.fees + lambda * std::abs(delta) * price;
  next.t = state.t + 1;

  const double next_price = config.series[next.t].price();
  const double post_value = next.cash + next.position * next_price;

  StepRecord& r = out.record;
  r.timestamp = bar.timestamp;
  r.open = bar.open;
  r.high = bar.high;
  r.low = bar.low;
  r.close = bar.close;
  r.volume = bar.volume;
  r.price = price;
  r.cash = next.cash;
  r.position = next.position;
  r.pre_value = pre_value;
  r.action = action;
  r.post_value = post_value;
  r.ret = (post_value - pre_value) / pre_value;
  out.reward = r.ret;
  return out;
}

double episode_return(std::span<const StepRecord> records) {
  if (records.empty()) throw DataError("episode_return: empty trajectory");
  return (records.back().post_value - records.front().pre_value) / records.front().pre_value;
}

TradingEnv::TradingEnv(TradingEnvConfig config)
    : config_(std::make_shared<const TradingEnvConfig>(std::move(config))), state_(trading_reset(*config_)) {}

const TradingState& TradingEnv::reset() {
  state_ = trading_reset(*config_);
  records_.clear();
  return state_;
}

StepResult TradingEnv::step(Action action) {
  StepResult res = trading_step(*config_, state_, action);
  state_ = res.state;
  records_.push_back(res.record);
  return res;
}

}  // namespace tradekit::envs
