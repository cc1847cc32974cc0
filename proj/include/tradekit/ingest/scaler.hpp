#pragma once

#include <map>
#include <span>
#include <string>
#include <utility>

#include "tradekit/core/types.hpp"

namespace tradekit::ingest {

inline constexpr double kDefaultStdFloor = 1e-8;

struct Moments {
  double mean = 0.0;
  double std = 0.0;  // population; already floored at epsilon
  bool operator==(const Moments&) const = default;
};

/// Per-(symbol, feature) standardization parameters fitted on train rows.
struct ScalerParams {
  double epsilon = kDefaultStdFloor;
  std::map<std::pair<std::string, std::string>, Moments> entries;

  const Moments& at(const std::string& symbol, const std::string& feature) const;
  bool operator==(const ScalerParams&) const = default;
};

/// Mean and population std of every column over valid cells of rows with
/// timestamp < split.train_end, per asset. std below epsilon is replaced by
/// epsilon. Throws DataError when an asset has no train rows or a column has
/// no valid train cell.
ScalerParams fit_scaler(std::span<const FeatureMatrix> tables, const SplitSpec& split,
                        double epsilon = kDefaultStdFloor);

/// (x - mean) / max(std, epsilon) on every valid cell, train and test alike.
/// Throws DataError when params lack an entry for a column.
FeatureMatrix apply_scaler(const FeatureMatrix& table, const ScalerParams& params);

}  // namespace tradekit::ingest
