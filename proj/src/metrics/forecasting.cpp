#include "tradekit/metrics/forecasting.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "tradekit/core/errors.hpp"

namespace tradekit::metrics {

PredictionPanel::PredictionPanel(std::size_t num_assets, std::size_t num_times, std::vector<double> predictions,
                                 std::vector<double> truths, std::vector<std::uint8_t> prediction_mask,
                                 std::vector<std::uint8_t> truth_mask)
    : n_(num_assets), t_(num_times), pred_(std::move(predictions)), truth_(std::move(truths)),
      mask_(std::move(prediction_mask)) {
  const std::size_t cells = n_ * t_;
  if (pred_.size() != cells || truth_.size() != cells || mask_.size() != cells || truth_mask.size() != cells) {
    throw DataError("prediction panel: array sizes do not match " + std::to_string(n_) + "x" + std::to_string(t_));
  }
  for (std::size_t i = 0; i < cells; ++i) {
    if ((mask_[i] != 0) != (truth_mask[i] != 0)) throw DataError("prediction panel: prediction and truth masks differ");
  }
}

PredictionPanel::PredictionPanel(std::size_t num_assets, std::size_t num_times, std::vector<double> predictions,
                                 std::vector<double> truths)
    : PredictionPanel(num_assets, num_times, std::move(predictions), std::move(truths),
                      std::vector<std::uint8_t>(num_assets * num_times, 1),
                      std::vector<std::uint8_t>(num_assets * num_times, 1)) {}

namespace {

template <typename F>
double mean_error(const PredictionPanel& p, F&& f, const char* name) {
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < p.num_assets(); ++i) {
    for (std::size_t t = 0; t < p.num_times(); ++t) {
      if (!p.present(i, t)) continue;
      sum += f(p.prediction(i, t) - p.truth(i, t));
      ++n;
    }
  }
  if (n == 0) throw DataError(std::string(name) + ": no present cells");
  return sum / static_cast<double>(n);
}

double pearson(std::span<const double> a, std::span<const double> b) {
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / (std::sqrt(saa) * std::sqrt(sbb));
}

bool fully_tied(std::span<const double> x) {
  return std::all_of(x.begin(), x.end(), [&](double v) { return v == x.front(); });
}

}  // namespace

double mae(const PredictionPanel& p) {
  return mean_error(p, [](double e) { return std::abs(e); }, "MAE");
}

double mse(const PredictionPanel& p) {
  return mean_error(p, [](double e) { return e * e; }, "MSE");
}

std::vector<double> average_ranks(std::span<const double> x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(x.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
    const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

double rank_ic_t(const PredictionPanel& p, std::size_t t) {
  if (t >= p.num_times()) throw DataError("RankIC: step out of range");
  std::vector<double> pred, truth;
  for (std::size_t i = 0; i < p.num_assets(); ++i) {
    if (!p.present(i, t)) continue;
    pred.push_back(p.prediction(i, t));
    truth.push_back(p.truth(i, t));
  }
  if (pred.size() < 2) throw UndefinedMetricError("RankIC: fewer than 2 assets at step " + std::to_string(t));
  if (fully_tied(pred) || fully_tied(truth)) {
    throw UndefinedMetricError("RankIC: degenerate ranks at step " + std::to_string(t));
  }
  const auto rp = average_ranks(pred);
  const auto rt = average_ranks(truth);
  return pearson(rp, rt);
}

RankIcSummary rank_ic(const PredictionPanel& p) {
  RankIcSummary s;
  s.per_step.resize(p.num_times());
  double sum = 0.0;
  std::size_t used = 0;
  for (std::size_t t = 0; t < p.num_times(); ++t) {
    try {
      const double v = rank_ic_t(p, t);
      s.per_step[t] = v;
      sum += v;
      ++used;
    } catch (const UndefinedMetricError&) {
      s.skipped.push_back(t);
    }
  }
  if (used == 0) throw UndefinedMetricError("RankIC: no step with usable ranks");
  s.mean = sum / static_cast<double>(used);
  return s;
}

double rank_icir(const PredictionPanel& p) {
  const RankIcSummary s = rank_ic(p);
  std::vector<double> vals;
  for (const auto& v : s.per_step) {
    if (v) vals.push_back(*v);
  }
  if (vals.size() < 2) throw UndefinedMetricError("RankICIR: needs at least 2 usable steps");
  if (fully_tied(vals)) throw UndefinedMetricError("RankICIR: zero spread of RankIC over time");
  double ss = 0.0;
  for (double v : vals) ss += (v - s.mean) * (v - s.mean);
  const double sd = std::sqrt(ss / static_cast<double>(vals.size() - 1));
  if (sd == 0.0) throw UndefinedMetricError("RankICIR: zero spread of RankIC over time");
  return s.mean / sd;
}

double score(long n_correct, long n_total) {
  if (n_total <= 0) throw DataError("Score: n_total must be > 0");
  if (n_correct < 0 || n_correct > n_total) throw DataError("Score: n_correct outside [0, n_total]");
  return static_cast<double>(n_correct) / static_cast<double>(n_total) * 100.0;
}

}  // namespace tradekit::metrics
