#pragma once

#include <span>
#include <string>
#include <string_view>

#include "tradekit/core/types.hpp"
#include "tradekit/envs/trading_env.hpp"

namespace tradekit::envs {

inline constexpr std::size_t kPromptHistoryRows = 7;
inline constexpr std::size_t kPromptNewsItems = 5;

/// Everything the trading prompt shows for one decision.
struct PromptContext {
  std::string name;
  std::string symbol;
  std::span<const Bar> bars;              // window ending at the decision bar
  std::span<const StepRecord> records;    // episode so far
  std::span<const NewsItem> news;         // already windowed, oldest first
  Timestamp now{};
  double price = 0.0;
  double cash = 0.0;
  double position = 0.0;
};

/// Built-in markdown template. Placeholders use {{name}} syntax.
std::string_view default_trading_template();

/// Fills the template. Tables keep the trailing kPromptHistoryRows entries;
/// the valid-action table lists BUY and SELL rows only. Prices and cash use
/// two decimals, volumes %g. Unknown placeholders are left untouched.
std::string render_prompt(const PromptContext& ctx, std::string_view tmpl = default_trading_template());

/// Prompt for the environment's current decision bar, with the newest
/// kPromptNewsItems news items up to that bar.
std::string render_env_prompt(const TradingEnv& env, std::string_view tmpl = default_trading_template());

}  // namespace tradekit::envs
