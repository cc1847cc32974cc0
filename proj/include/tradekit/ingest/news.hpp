#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tradekit/core/types.hpp"

namespace tradekit::ingest {

enum class RecordPolicy { kStrict, kFlag };

struct MalformedLine {
  std::size_t line = 0;  // 1-based
  std::string reason;
};

struct NewsParseResult {
  std::vector<NewsItem> items;  // sorted by timestamp (stable)
  std::vector<MalformedLine> malformed;
};

/// One JSON object per line with timestamp, symbol, title and content.
/// Blank lines are skipped. Under kStrict the first bad line throws
/// ParseError carrying its line number.
NewsParseResult parse_news_jsonl(std::string_view bytes, RecordPolicy policy = RecordPolicy::kStrict);

/// Items for `symbol` with timestamp <= `now`, newest `max_items` of them,
/// returned oldest first.
std::vector<NewsItem> news_window(std::span<const NewsItem> items, const std::string& symbol, Timestamp now,
                                  std::size_t max_items);

}  // namespace tradekit::ingest
