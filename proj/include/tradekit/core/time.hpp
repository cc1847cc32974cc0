#pragma once

#include <chrono>
#include <span>
#include <string>
#include <string_view>

namespace tradekit {

/// UTC instant with one-second resolution.
using Timestamp = std::chrono::sys_seconds;

enum class Granularity { kDaily, kIntraday };

/// Parses ISO-8601 style instants:
///   YYYY-MM-DD
///   YYYY-MM-DD[ T]HH:MM[:SS[.fff]][Z|±HH:MM]
/// Offsets are folded into UTC. Throws ParseError on anything else.
Timestamp parse_timestamp(std::string_view text);

/// "YYYY-MM-DD" when the instant is midnight UTC, else "YYYY-MM-DD HH:MM:SS".
std::string format_timestamp(Timestamp ts);

/// Always "YYYY-MM-DD HH:MM:SS".
std::string format_datetime(Timestamp ts);

/// Daily when every instant sits on a UTC midnight.
Granularity granularity_of(std::span<const Timestamp> stamps);

Timestamp make_date(int year, unsigned month, unsigned day);

struct TemporalFeatures {
  int day = 1;      // 1-31
  int month = 1;    // 1-12
  int weekday = 0;  // 0 = Monday
  int year = 1970;
};

TemporalFeatures temporal_features(Timestamp ts);

}  // namespace tradekit
