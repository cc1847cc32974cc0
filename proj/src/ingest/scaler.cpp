#include "tradekit/ingest/scaler.hpp"

#include <algorithm>
#include <cmath>

#include "tradekit/core/errors.hpp"

namespace tradekit::ingest {

const Moments& ScalerParams::at(const std::string& symbol, const std::string& feature) const {
  const auto it = entries.find({symbol, feature});
  if (it == entries.end()) throw DataError("scaler has no parameters for " + symbol + "/" + feature);
  return it->second;
}

ScalerParams fit_scaler(std::span<const FeatureMatrix> tables, const SplitSpec& split, double epsilon) {
  if (!(epsilon > 0.0)) throw ConfigError("scaler epsilon must be > 0");
  ScalerParams params;
  params.epsilon = epsilon;
  for (const auto& table : tables) {
    const auto train_rows = static_cast<std::size_t>(
        std::lower_bound(table.calendar.begin(), table.calendar.end(), split.train_end) - table.calendar.begin());
    if (train_rows == 0) throw DataError("scaler: empty train split for " + table.symbol);

    for (std::size_t c = 0; c < table.cols(); ++c) {
      double sum = 0.0;
      std::size_t n = 0;
      for (std::size_t r = 0; r < train_rows; ++r) {
        if (!table.is_valid(r, c)) continue;
        sum += table.at(r, c);
        ++n;
      }
      if (n == 0) {
        throw DataError("scaler: no valid train observations for " + table.symbol + "/" + table.columns[c]);
      }
      const double mean = sum / static_cast<double>(n);
      double ss = 0.0;
      for (std::size_t r = 0; r < train_rows; ++r) {
        if (!table.is_valid(r, c)) continue;
        const double d = table.at(r, c) - mean;
        ss += d * d;
      }
      double sd = std::sqrt(ss / static_cast<double>(n));
      if (sd < epsilon) sd = epsilon;
      params.entries[{table.symbol, table.columns[c]}] = Moments{mean, sd};
    }
  }
  return params;
}

FeatureMatrix apply_scaler(const FeatureMatrix& table, const ScalerParams& params) {
  FeatureMatrix out = table;
  for (std::size_t c = 0; c < table.cols(); ++c) {
    const Moments& m = params.at(table.symbol, table.columns[c]);
    const double denom = std::max(m.std, params.epsilon);
    for (std::size_t r = 0; r < table.rows(); ++r) {
      if (!table.is_valid(r, c)) continue;
      out.values[r * out.cols() + c] = (table.at(r, c) - m.mean) / denom;
    }
  }
  return out;
}

}  // namespace tradekit::ingest
