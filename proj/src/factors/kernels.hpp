#pragma once

// Internal column kernels shared by the group functions and the full-table
// driver. Not installed.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "tradekit/core/types.hpp"
#include "tradekit/factors/alpha158.hpp"

namespace tradekit::factors::detail {

/// Per-bar derived series, computed once per asset.
struct Inputs {
  std::size_t n = 0;
  std::vector<double> open, high, low, close, volume;
  std::vector<double> ret1;       // close/close[-1] - 1, valid t >= 1
  std::vector<double> absret;     // |ret1|
  std::vector<double> vchg1;      // volume/volume[-1] - 1
  std::vector<std::uint8_t> vchg_ok;
  std::vector<double> logvol;     // log(volume + 1)
  std::vector<double> cratio;     // close/close[-1]
  std::vector<double> lvr;        // log(volume/volume[-1] + 1)

  explicit Inputs(const AssetSeries& series);
};

void fill_kbar(std::size_t which, const Inputs& in, Column& out);
void fill_family(Family f, int w, const Inputs& in, Column& out);
void fill_logvol(const Inputs& in, Column& out);

Column make_column(std::string name, std::size_t n);

}  // namespace tradekit::factors::detail
