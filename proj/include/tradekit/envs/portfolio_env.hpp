#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "tradekit/core/types.hpp"
#include "tradekit/envs/trading_env.hpp"

namespace tradekit::envs {

/// N + 1 allocation weights over the cash-inclusive simplex; w[0] is cash.
struct WeightVector {
  std::vector<double> w;

  /// Throws DataError unless there are `num_assets` + 1 finite weights,
  /// all >= 0, summing to 1 within 1e-9.
  void validate(std::size_t num_assets) const;
  static WeightVector all_cash(std::size_t num_assets);
};

struct PortfolioEnvConfig {
  Panel panel;
  double initial_cash = kDefaultInitialCash;
  double fee_rate = kDefaultFeeRate;
  std::size_t start_index = 0;

  void validate() const;
};

struct PortfolioState {
  std::size_t t = 0;
  double cash = 0.0;
  std::vector<double> holdings;  // shares per asset
  double fees = 0.0;
};

struct PortfolioRecord {
  Timestamp timestamp{};
  double pre_value = 0.0;
  double cost = 0.0;
  double post_cost_value = 0.0;
  double post_value = 0.0;
  double ret = 0.0;
  std::vector<double> weights;
};

struct PortfolioStepResult {
  PortfolioState state;
  PortfolioRecord record;
  double reward = 0.0;
};

PortfolioState portfolio_reset(const PortfolioEnvConfig& config);

/// Rebalances to `target` at bar t prices, charging lambda on the absolute
/// value traded in each asset (cash leg free). Costs are paid out of the
/// book so that post-cost holdings sit exactly on the target weights of the
/// post-cost value V', which solves V' = V - lambda * sum_i |w_i V' - c_i|.
/// Then marks at t + 1; reward = (V_{t+1} - V') / V'.
/// Throws DataError on invalid weights, missing prices or stepping past the end.
PortfolioStepResult portfolio_step(const PortfolioEnvConfig& config, const PortfolioState& state,
                                   const WeightVector& target);

double portfolio_value(const PortfolioEnvConfig& config, const PortfolioState& state);

/// Header: timestamp,pre_value,cost,post_cost_value,post_value,ret,w_cash,w_<symbol>...
std::string portfolio_ledger_csv(std::span<const PortfolioRecord> records, std::span<const std::string> symbols);

}  // namespace tradekit::envs
