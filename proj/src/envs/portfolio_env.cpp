#include "tradekit/envs/portfolio_env.hpp"

#include <algorithm>
#include <cmath>

#include "tradekit/core/errors.hpp"
#include "tradekit/core/text.hpp"

namespace tradekit::envs {

namespace {

constexpr double kWeightSumTol = 1e-9;

// Root of f(x) = x + lambda * sum_i |w_i x - c_i| - V on [0, V]. f is
// piecewise linear and strictly increasing, so we locate the segment that
// contains the root from the sorted kinks c_i / w_i and solve it directly.
double solve_post_cost_value(double V, double lambda, std::span<const double> w, std::span<const double> c) {
  if (lambda == 0.0) return V;
  auto f = [&](double x) {
    double s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) s += std::abs(w[i] * x - c[i]);
    return x + lambda * s - V;
  };
  std::vector<double> knots{0.0};
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] > 0.0) {
      const double k = c[i] / w[i];
      if (k > 0.0 && k < V) knots.push_back(k);
    }
  }
  knots.push_back(V);
  std::sort(knots.begin(), knots.end());

  std::size_t seg = knots.size() - 2;
  for (std::size_t j = 1; j + 1 < knots.size(); ++j) {
    if (f(knots[j]) >= 0.0) {
      seg = j - 1;
      break;
    }
  }
  const double mid = 0.5 * (knots[seg] + knots[seg + 1]);
  double slope = 1.0;
  double offset = V;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double sgn = (w[i] * mid - c[i]) >= 0.0 ? 1.0 : -1.0;
    slope += lambda * sgn * w[i];
    offset += lambda * sgn * c[i];
  }
  return offset / slope;
}

}  // namespace

void WeightVector::validate(std::size_t num_assets) const {
  if (w.size() != num_assets + 1) {
    throw DataError("weights: expected " + std::to_string(num_assets + 1) + " entries, got " +
                    std::to_string(w.size()));
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!std::isfinite(w[i]) || w[i] < 0.0) throw DataError("weights: entry " + std::to_string(i) + " is negative or non-finite");
    sum += w[i];
  }
  if (std::abs(sum - 1.0) > kWeightSumTol) throw DataError("weights: sum is " + format_shortest(sum) + ", expected 1");
}

WeightVector WeightVector::all_cash(std::size_t num_assets) {
  WeightVector v;
  v.w.assign(num_assets + 1, 0.0);
  v.w[0] = 1.0;
  return v;
}

void PortfolioEnvConfig::validate() const {
  if (!(initial_cash > 0.0) || !std::isfinite(initial_cash)) throw ConfigError("initial_cash must be > 0");
  if (!(fee_rate >= 0.0 && fee_rate < 1.0)) throw ConfigError("fee_rate must lie in [0, 1)");
  if (panel.num_assets() == 0) throw DataError("portfolio env: panel has no assets");
  if (panel.num_times() < 2 || start_index + 1 >= panel.num_times()) {
    throw DataError("portfolio env: window leaves no bar to step into");
  }
}

PortfolioState portfolio_reset(const PortfolioEnvConfig& config) {
  config.validate();
  PortfolioState s;
  s.t = config.start_index;
  s.cash = config.initial_cash;
  s.holdings.assign(config.panel.num_assets(), 0.0);
  return s;
}

double portfolio_value(const PortfolioEnvConfig& config, const PortfolioState& state) {
  double v = state.cash;
  for (std::size_t i = 0; i < state.holdings.size(); ++i) {
    if (state.holdings[i] == 0.0) continue;
    if (!config.panel.present(i, state.t)) {
      throw DataError("portfolio env: no price for " + config.panel.symbols()[i] + " at " +
                      format_timestamp(config.panel.calendar()[state.t]));
    }
    v += state.holdings[i] * config.panel.price(i, state.t);
  }
  return v;
}

PortfolioStepResult portfolio_step(const PortfolioEnvConfig& config, const PortfolioState& state,
                                   const WeightVector& target) {
  const Panel& panel = config.panel;
  const std::size_t n = panel.num_assets();
  if (state.t + 1 >= panel.num_times()) throw DataError("portfolio env: step past end of window");
  if (state.holdings.size() != n) throw DataError("portfolio env: holdings do not match the panel");
  target.validate(n);

  const std::size_t t = state.t;
  for (std::size_t i = 0; i < n; ++i) {
    if (state.holdings[i] == 0.0 && target.w[i + 1] == 0.0) continue;
    for (std::size_t u : {t, t + 1}) {
      if (!panel.present(i, u)) {
        throw DataError("portfolio env: no price for " + panel.symbols()[i] + " at " +
                        format_timestamp(panel.calendar()[u]));
      }
    }
  }

  std::vector<double> current(n, 0.0);
  double V = state.cash;
  for (std::size_t i = 0; i < n; ++i) {
    if (state.holdings[i] != 0.0) current[i] = state.holdings[i] * panel.price(i, t);
    V += current[i];
  }
  if (!(V > 0.0)) throw DataError("portfolio env: non-positive book value");

  const std::span<const double> w_assets(target.w.data() + 1, n);
  const double V_post = solve_post_cost_value(V, config.fee_rate, w_assets, current);
  if (!(V_post > 0.0)) throw DataError("portfolio env: rebalance cost exceeds the book");

  PortfolioStepResult out;
  PortfolioState& next = out.state;
  next.t = t + 1;
  next.cash = target.w[0] * V_post;
  next.holdings.assign(n, 0.0);
  double post_value = next.cash;
  for (std::size_t i = 0; i < n; ++i) {
    if (target.w[i + 1] == 0.0) continue;
    next.holdings[i] = target.w[i + 1] * V_post / panel.price(i, t);
    post_value += next.holdings[i] * panel.price(i, t + 1);
  }
  const double cost = V - V_post;
  next.fees = state.fees + cost;

  PortfolioRecord& r = out.record;
  r.timestamp = panel.calendar()[t];
  r.pre_value = V;
  r.cost = cost;
  r.post_cost_value = V_post;
  r.post_value = post_value;
  r.ret = (post_value - V_post) / V_post;
  r.weights = target.w;
  out.reward = r.ret;
  return out;
}

std::string portfolio_ledger_csv(std::span<const PortfolioRecord> records, std::span<const std::string> symbols) {
  std::string out = "timestamp,pre_value,cost,post_cost_value,post_value,ret,w_cash";
  for (const auto& s : symbols) out += ",w_" + s;
  out += '\n';
  for (const auto& r : records) {
    out += format_timestamp(r.timestamp);
    for (double v : {r.pre_value, r.cost, r.post_cost_value, r.post_value, r.ret}) {
      out += ',';
      out += format_shortest(v);
    }
    for (double v : r.weights) {
      out += ',';
      out += format_shortest(v);
    }
    out += '\n';
  }
  return out;
}

}  // namespace tradekit::envs
