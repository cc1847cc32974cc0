#include "tradekit/core/returns.hpp"

#include <string>

#include "tradekit/core/errors.hpp"

namespace tradekit {

RelativeReturns compute_relative_returns(const Panel& panel, std::size_t anchor, std::size_t horizon) {
  if (horizon == 0) throw DataError("relative returns: horizon must be >= 1");
  if (anchor >= panel.num_times() || anchor + horizon >= panel.num_times()) {
    throw DataError("relative returns: anchor " + std::to_string(anchor) + " + horizon " +
                    std::to_string(horizon) + " exceeds calendar of length " +
                    std::to_string(panel.num_times()));
  }
  RelativeReturns out;
  out.anchor_index = anchor;
  out.num_assets = panel.num_assets();
  out.horizon = horizon;
  out.values.assign(out.num_assets * horizon, 0.0);
  out.present.assign(out.num_assets * horizon, 0);

  for (std::size_t i = 0; i < panel.num_assets(); ++i) {
    if (!panel.present(i, anchor)) continue;
    const double base = panel.close(i, anchor);
    if (!(base > 0.0)) {
      throw DataError("relative returns: non-positive anchor price for " + panel.symbols()[i]);
    }
    for (std::size_t s = 0; s < horizon; ++s) {
      const std::size_t t = anchor + s + 1;
      if (!panel.present(i, t)) continue;
      out.values[i * horizon + s] = panel.close(i, t) / base - 1.0;
      out.present[i * horizon + s] = 1;
    }
  }
  return out;
}

}  // namespace tradekit
