#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "tradekit/core/types.hpp"

namespace tradekit {

/// Forward close-to-close returns relative to an anchor bar, N assets by
/// S horizon steps. Cells are missing when either end of the ratio is masked.
struct RelativeReturns {
  std::size_t anchor_index = 0;
  std::size_t num_assets = 0;
  std::size_t horizon = 0;
  std::vector<double> values;        // [asset][step]
  std::vector<std::uint8_t> present;

  std::optional<double> at(std::size_t asset, std::size_t step) const {
    const std::size_t i = asset * horizon + step;
    if (!present[i]) return std::nullopt;
    return values[i];
  }
};

/// values[i][s] = close[i][anchor + s + 1] / close[i][anchor] - 1.
/// Throws DataError when anchor + horizon runs past the calendar or a present
/// anchor price is not positive.
RelativeReturns compute_relative_returns(const Panel& panel, std::size_t anchor, std::size_t horizon);

}  // namespace tradekit
