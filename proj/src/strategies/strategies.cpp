#include "tradekit/strategies/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tradekit/core/errors.hpp"

namespace tradekit::strategies {

std::vector<Action> buy_and_hold(std::size_t length) {
  std::vector<Action> out(length, Action::kHold);
  if (!out.empty()) out[0] = Action::kBuy;
  return out;
}

std::vector<double> ema(std::span<const double> x, std::size_t span) {
  if (x.empty()) throw ValidationError("ema: empty input");
  if (span == 0) throw ValidationError("ema: span must be >= 1");
  const double alpha = 2.0 / (static_cast<double>(span) + 1.0);
  std::vector<double> out(x.size());
  out[0] = x[0];
  for (std::size_t i = 1; i < x.size(); ++i) out[i] = alpha * x[i] + (1.0 - alpha) * out[i - 1];
  return out;
}

void MacdParams::validate() const {
  if (fast == 0 || slow == 0 || signal == 0) throw ValidationError("macd: spans must be >= 1");
  if (fast >= slow) throw ValidationError("macd: fast span must be below slow span");
}

MacdResult macd_signals(std::span<const double> close, const MacdParams& params, std::size_t trade_from) {
  params.validate();
  if (close.size() < params.slow) {
    throw ValidationError("macd: need at least " + std::to_string(params.slow) + " bars, got " +
                          std::to_string(close.size()));
  }
  MacdResult r;
  const auto fast = ema(close, params.fast);
  const auto slow = ema(close, params.slow);
  r.dif.resize(close.size());
  for (std::size_t i = 0; i < close.size(); ++i) r.dif[i] = fast[i] - slow[i];
  r.dea = ema(r.dif, params.signal);

  const std::size_t n = close.size();
  r.crossings.assign(n, 0);
  for (std::size_t i = 1; i < n; ++i) {
    const double prev = r.dif[i - 1] - r.dea[i - 1];
    const double now = r.dif[i] - r.dea[i];
    if (prev <= 0.0 && now > 0.0) r.crossings[i] = 1;
    if (prev >= 0.0 && now < 0.0) r.crossings[i] = -1;
  }

  r.actions.assign(n, Action::kHold);
  const std::size_t first = std::max(params.slow, trade_from);
  int pending = 0;
  for (std::size_t i = 0; i < std::min(first, n); ++i) {
    if (r.crossings[i] != 0) pending = r.crossings[i];
  }
  bool holding = false;
  for (std::size_t i = first; i < n; ++i) {
    int signal = r.crossings[i];
    if (i == first && signal == 0) {
      const double gap = r.dif[i] - r.dea[i];
      if ((pending > 0 && gap > 0.0) || (pending < 0 && gap < 0.0)) signal = pending;
    }
    if (signal > 0 && !holding) {
      r.actions[i] = Action::kBuy;
      holding = true;
    } else if (signal < 0 && holding) {
      r.actions[i] = Action::kSell;
      holding = false;
    }
  }
  return r;
}

std::vector<Action> threshold_rule(std::span<const double> predictions, double tau) {
  if (!(tau >= 0.0)) throw ValidationError("threshold_rule: tau must be >= 0");
  std::vector<Action> out;
  out.reserve(predictions.size());
  for (double y : predictions) {
    out.push_back(y > tau ? Action::kBuy : (y < -tau ? Action::kSell : Action::kHold));
  }
  return out;
}

void ScorePanel::validate() const {
  if (values.size() != num_assets() * num_times || mask.size() != values.size()) {
    throw DataError("score panel: storage does not match " + std::to_string(num_assets()) + " x " +
                    std::to_string(num_times));
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (mask[i] && !std::isfinite(values[i])) throw DataError("score panel: non-finite score");
  }
}

void TopkParams::validate(std::size_t universe) const {
  if (!(1 <= d && d <= k && k <= universe)) {
    throw ConfigError("topk: need 1 <= d <= k <= universe size (k=" + std::to_string(k) +
                      ", d=" + std::to_string(d) + ", universe=" + std::to_string(universe) + ")");
  }
}

TopkResult topk_dropout(const ScorePanel& scores, const TopkParams& params) {
  scores.validate();
  const std::size_t n = scores.num_assets();
  params.validate(n);
  const std::size_t k = params.k;
  const std::size_t d = params.d;

  TopkResult out;
  std::vector<std::size_t> held;
  for (std::size_t t = 0; t < scores.num_times; ++t) {
    auto score = [&](std::size_t a) {
      return scores.present(a, t) ? scores.at(a, t) : -std::numeric_limits<double>::infinity();
    };
    auto better = [&](std::size_t a, std::size_t b) {
      const double sa = score(a);
      const double sb = score(b);
      if (sa != sb) return sa > sb;
      return scores.symbols[a] < scores.symbols[b];
    };

    std::size_t scorable = 0;
    for (std::size_t a = 0; a < n; ++a) scorable += scores.present(a, t) ? 1 : 0;
    if (scorable < k) {
      throw DataError("topk: period " + std::to_string(t) + " has " + std::to_string(scorable) +
                      " scorable assets, need " + std::to_string(k));
    }

    std::vector<std::size_t> last = held;
    std::sort(last.begin(), last.end(), better);

    std::vector<std::size_t> outsiders;
    for (std::size_t a = 0; a < n; ++a) {
      if (scores.present(a, t) && std::find(held.begin(), held.end(), a) == held.end()) outsiders.push_back(a);
    }
    std::sort(outsiders.begin(), outsiders.end(), better);
    const std::size_t want = d + k - std::min(k + d, last.size());
    if (outsiders.size() > want) outsiders.resize(want);

    std::vector<std::size_t> comb = last;
    comb.insert(comb.end(), outsiders.begin(), outsiders.end());
    std::sort(comb.begin(), comb.end(), better);
    const std::size_t cut = comb.size() > d ? comb.size() - d : 0;

    std::vector<std::size_t> sell;
    for (std::size_t a : last) {
      if (std::find(comb.begin() + static_cast<std::ptrdiff_t>(cut), comb.end(), a) != comb.end()) sell.push_back(a);
    }
    const std::size_t n_buy = std::min(outsiders.size(), sell.size() + k - std::min(k, last.size()));

    std::vector<std::size_t> next;
    for (std::size_t a : last) {
      if (std::find(sell.begin(), sell.end(), a) == sell.end()) next.push_back(a);
    }
    next.insert(next.end(), outsiders.begin(), outsiders.begin() + static_cast<std::ptrdiff_t>(n_buy));
    std::sort(next.begin(), next.end());
    held = next;

    envs::WeightVector w;
    w.w.assign(n + 1, 0.0);
    if (held.empty()) {
      w.w[0] = 1.0;
    } else {
      const double each = 1.0 / static_cast<double>(held.size());
      for (std::size_t a : held) w.w[a + 1] = each;
    }
    out.holdings.push_back(held);
    out.weights.push_back(std::move(w));
  }
  return out;
}

}  // namespace tradekit::strategies
