#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace tradekit::metrics {

/// Predictions and realized values for N assets over T steps, stored
/// [asset][time], with one shared presence mask.
class PredictionPanel {
 public:
  /// Throws DataError when shapes differ or the two masks disagree.
  PredictionPanel(std::size_t num_assets, std::size_t num_times, std::vector<double> predictions,
                  std::vector<double> truths, std::vector<std::uint8_t> prediction_mask,
                  std::vector<std::uint8_t> truth_mask);
  /// All cells present.
  PredictionPanel(std::size_t num_assets, std::size_t num_times, std::vector<double> predictions,
                  std::vector<double> truths);

  std::size_t num_assets() const noexcept { return n_; }
  std::size_t num_times() const noexcept { return t_; }
  bool present(std::size_t asset, std::size_t t) const { return mask_[asset * t_ + t] != 0; }
  double prediction(std::size_t asset, std::size_t t) const { return pred_[asset * t_ + t]; }
  double truth(std::size_t asset, std::size_t t) const { return truth_[asset * t_ + t]; }

 private:
  std::size_t n_;
  std::size_t t_;
  std::vector<double> pred_;
  std::vector<double> truth_;
  std::vector<std::uint8_t> mask_;
};

double mae(const PredictionPanel& p);
double mse(const PredictionPanel& p);

/// 1-based ranks with ties sharing their average rank.
std::vector<double> average_ranks(std::span<const double> x);

/// Pearson correlation of average ranks of predictions vs truths across the
/// assets present at step t. UndefinedMetricError with fewer than 2 assets
/// or when either side is fully tied.
double rank_ic_t(const PredictionPanel& p, std::size_t t);

struct RankIcSummary {
  double mean = 0.0;
  std::vector<std::optional<double>> per_step;  // nullopt where skipped
  std::vector<std::size_t> skipped;
};

/// Mean of rank_ic_t over steps where it is defined. UndefinedMetricError
/// when no step is usable.
RankIcSummary rank_ic(const PredictionPanel& p);

/// rank_ic mean / sample std (ddof = 1) of the per-step values. Needs >= 2
/// usable steps and non-zero spread.
double rank_icir(const PredictionPanel& p);

/// n_correct / n_total * 100.
double score(long n_correct, long n_total);

}  // namespace tradekit::metrics
