#pragma once

#include <span>
#include <vector>

namespace tradekit::metrics {

/// Per-period simple returns with their annualization context.
struct ReturnSeries {
  std::vector<double> rets;
  double periods_per_year = 252.0;
  double risk_free = 0.0;  // per period
};

/// (prod(1 + r_t))^(N/T) - 1
double arr(const ReturnSeries& rs);

/// (mean - r_f) / std * sqrt(N), population std. Needs T >= 2 and non-zero
/// variance, else UndefinedMetricError.
double sharpe(const ReturnSeries& rs);

/// Value path V_0 = 1, V_t = prod_{s<=t}(1 + r_s), returned with V_0 first.
std::vector<double> equity_curve(std::span<const double> rets);

/// (running peak - V_t) / running peak along equity_curve(rets).
std::vector<double> drawdown_curve(std::span<const double> rets);

/// Largest peak-to-trough decline of the value path, as a fraction.
double mdd(const ReturnSeries& rs);

/// arr / |mdd|; UndefinedMetricError when mdd == 0.
double calmar(const ReturnSeries& rs);

/// sqrt(mean(min(r - r_f, 0)^2)) * sqrt(N)
double downside_dev(const ReturnSeries& rs);

/// (mean - r_f) / DD_period * sqrt(N), where DD_period is downside_dev before
/// annualization; annualization is applied once. UndefinedMetricError when no
/// return falls below r_f.
double sortino(const ReturnSeries& rs);

/// std(rets) * sqrt(N), population std. Needs T >= 2.
double vol(const ReturnSeries& rs);

}  // namespace tradekit::metrics
