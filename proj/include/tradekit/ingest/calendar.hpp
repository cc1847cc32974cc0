#pragma once

#include <span>

#include "tradekit/core/types.hpp"

namespace tradekit::ingest {

/// Panel over the sorted union of all timestamps; an asset is masked out
/// where it has no bar. Throws DataError when daily and intraday series are
/// mixed or two series share a symbol.
Panel align_calendar(std::span<const AssetSeries> series);

}  // namespace tradekit::ingest
