#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tradekit/envs/portfolio_env.hpp"
#include "tradekit/envs/trading_env.hpp"

namespace tradekit::strategies {

using envs::Action;

/// [BUY, HOLD, HOLD, ...] of the given length.
std::vector<Action> buy_and_hold(std::size_t length);

/// Recursive EMA, alpha = 2 / (span + 1), seeded with the first value.
/// Throws ValidationError on an empty input or span 0.
std::vector<double> ema(std::span<const double> x, std::size_t span);

struct MacdParams {
  std::size_t fast = 12;
  std::size_t slow = 26;
  std::size_t signal = 9;

  void validate() const;
};

struct MacdResult {
  std::vector<double> dif;
  std::vector<double> dea;
  /// +1 where DIF crosses above DEA (prev <= , now >), -1 for the reverse,
  /// 0 elsewhere. Bar 0 is never a crossing.
  std::vector<int> crossings;
  std::vector<Action> actions;
};

/// DIF/DEA crossover signals run through a flat/long automaton that starts
/// flat at max(slow, trade_from). Earlier bars emit HOLD; the latest
/// crossing seen before that bar is acted on there if DIF is still on the
/// same side of DEA. Throws ValidationError when the series is shorter
/// than `slow`.
MacdResult macd_signals(std::span<const double> close, const MacdParams& params = {}, std::size_t trade_from = 0);

/// BUY when y > tau, SELL when y < -tau, HOLD otherwise.
std::vector<Action> threshold_rule(std::span<const double> predictions, double tau);

/// Per-asset scores over time, stored [asset][time], with a presence mask.
struct ScorePanel {
  std::vector<std::string> symbols;
  std::size_t num_times = 0;
  std::vector<double> values;
  std::vector<std::uint8_t> mask;

  std::size_t num_assets() const noexcept { return symbols.size(); }
  bool present(std::size_t a, std::size_t t) const { return mask[a * num_times + t] != 0; }
  double at(std::size_t a, std::size_t t) const { return values[a * num_times + t]; }
  void validate() const;
};

struct TopkParams {
  std::size_t k = 0;
  std::size_t d = 0;  // swaps per period

  void validate(std::size_t universe) const;
};

struct TopkResult {
  std::vector<std::vector<std::size_t>> holdings;  // asset indices, sorted ascending
  std::vector<envs::WeightVector> weights;         // w[0] = cash
};

/// Top-k dropout: start from the k best-scored assets; each later period
/// ranks held assets together with the best (d + k - |held|) outsiders,
/// sells held names that fall in the bottom d of that combined list and
/// buys as many outsiders as needed to get back to k. Holdings are equal
/// weighted with zero cash. Ordering is by score descending then symbol.
/// A held asset without a score ranks last. Throws DataError when fewer
/// than k assets are scorable in some period.
TopkResult topk_dropout(const ScorePanel& scores, const TopkParams& params);

}  // namespace tradekit::strategies
