#include "tradekit/metrics/trading.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tradekit/core/errors.hpp"

namespace tradekit::metrics {

namespace {

void require_non_empty(const ReturnSeries& rs, const char* metric) {
  if (rs.rets.empty()) throw DataError(std::string(metric) + ": empty return series");
  if (!(rs.periods_per_year > 0.0)) throw DataError(std::string(metric) + ": periods_per_year must be > 0");
}

double mean_of(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double population_std(std::span<const double> x, double mean) {
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(x.size()));
}

bool all_equal(std::span<const double> x) {
  return std::all_of(x.begin(), x.end(), [&](double v) { return v == x.front(); });
}

}  // namespace

double arr(const ReturnSeries& rs) {
  require_non_empty(rs, "ARR");
  double growth = 1.0;
  for (double r : rs.rets) {
    if (!(r > -1.0)) throw DataError("ARR: return <= -1 in series");
    growth *= 1.0 + r;
  }
  return std::pow(growth, rs.periods_per_year / static_cast<double>(rs.rets.size())) - 1.0;
}

double sharpe(const ReturnSeries& rs) {
  require_non_empty(rs, "SR");
  if (rs.rets.size() < 2) throw UndefinedMetricError("SR: needs at least 2 returns");
  if (all_equal(rs.rets)) throw UndefinedMetricError("SR: zero variance");
  const double m = mean_of(rs.rets);
  const double sd = population_std(rs.rets, m);
  if (sd == 0.0) throw UndefinedMetricError("SR: zero variance");
  return (m - rs.risk_free) / sd * std::sqrt(rs.periods_per_year);
}

std::vector<double> equity_curve(std::span<const double> rets) {
  std::vector<double> v;
  v.reserve(rets.size() + 1);
  v.push_back(1.0);
  for (double r : rets) v.push_back(v.back() * (1.0 + r));
  return v;
}

std::vector<double> drawdown_curve(std::span<const double> rets) {
  const auto v = equity_curve(rets);
  std::vector<double> dd(v.size());
  double peak = v.front();
  for (std::size_t t = 0; t < v.size(); ++t) {
    peak = std::max(peak, v[t]);
    dd[t] = (peak - v[t]) / peak;
  }
  return dd;
}

double mdd(const ReturnSeries& rs) {
  require_non_empty(rs, "MDD");
  const auto dd = drawdown_curve(rs.rets);
  return *std::max_element(dd.begin(), dd.end());
}

double calmar(const ReturnSeries& rs) {
  const double d = mdd(rs);
  if (d == 0.0) throw UndefinedMetricError("CR: zero maximum drawdown");
  return arr(rs) / std::abs(d);
}

namespace {

double downside_period(const ReturnSeries& rs) {
  double ss = 0.0;
  for (double r : rs.rets) {
    const double d = std::min(r - rs.risk_free, 0.0);
    ss += d * d;
  }
  return std::sqrt(ss / static_cast<double>(rs.rets.size()));
}

}  // namespace

double downside_dev(const ReturnSeries& rs) {
  require_non_empty(rs, "DD");
  return downside_period(rs) * std::sqrt(rs.periods_per_year);
}

double sortino(const ReturnSeries& rs) {
  require_non_empty(rs, "SoR");
  const double dd = downside_period(rs);
  if (dd == 0.0) throw UndefinedMetricError("SoR: no returns below the risk-free rate");
  return (mean_of(rs.rets) - rs.risk_free) / dd * std::sqrt(rs.periods_per_year);
}

double vol(const ReturnSeries& rs) {
  require_non_empty(rs, "VOL");
  if (rs.rets.size() < 2) throw UndefinedMetricError("VOL: needs at least 2 returns");
  if (all_equal(rs.rets)) return 0.0;
  return population_std(rs.rets, mean_of(rs.rets)) * std::sqrt(rs.periods_per_year);
}

}  // namespace tradekit::metrics
