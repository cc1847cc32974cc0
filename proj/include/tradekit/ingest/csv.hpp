#pragma once

#include <string>
#include <string_view>

#include "tradekit/core/types.hpp"

namespace tradekit::ingest {

/// Parses an OHLCV CSV. The header must name timestamp, open, high, low,
/// close and volume in any order and case; adjusted_close (or adj_close) is
/// optional. Rows are sorted by timestamp. Throws ParseError naming the
/// 1-based row (header = row 1) and column on bad cells, and on duplicate
/// timestamps or missing columns.
AssetSeries parse_ohlcv_csv(std::string_view bytes, std::string symbol);

/// Canonical CSV with shortest round-trip numbers. adjusted_close is written
/// only when at least one bar carries it.
std::string serialize_ohlcv_csv(const AssetSeries& series);

}  // namespace tradekit::ingest
