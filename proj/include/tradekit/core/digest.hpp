#pragma once

#include <string>
#include <string_view>

#include "tradekit/core/types.hpp"

namespace tradekit {

/// Lowercase hex SHA-256 of `data`.
std::string sha256_hex(std::string_view data);

/// Digest over every bar field of a series (bit patterns, not text).
std::string series_digest(const AssetSeries& series);

}  // namespace tradekit
