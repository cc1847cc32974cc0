#include "tradekit/ingest/news.hpp"

#include <algorithm>
#include <nlohmann/json.hpp>

#include "tradekit/core/errors.hpp"
#include "tradekit/core/text.hpp"

namespace tradekit::ingest {

namespace {

using nlohmann::json;

NewsItem decode(const json& j) {
  if (!j.is_object()) throw ParseError("record is not a JSON object");
  auto text = [&](const char* key) -> std::string {
    const auto it = j.find(key);
    if (it == j.end() || !it->is_string()) throw ParseError(std::string("missing string field '") + key + "'");
    return it->get<std::string>();
  };
  NewsItem item;
  item.timestamp = parse_timestamp(text("timestamp"));
  item.symbol = text("symbol");
  item.title = text("title");
  item.content = text("content");
  if (trim(item.title).empty()) throw ParseError("empty title");
  return item;
}

}  // namespace

NewsParseResult parse_news_jsonl(std::string_view bytes, RecordPolicy policy) {
  NewsParseResult out;
  const auto lines = split_lines(bytes);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    try {
      out.items.push_back(decode(json::parse(lines[i])));
    } catch (const std::exception& e) {
      if (policy == RecordPolicy::kStrict) {
        throw ParseError("news jsonl line " + std::to_string(i + 1) + ": " + e.what());
      }
      out.malformed.push_back({i + 1, e.what()});
    }
  }
  std::stable_sort(out.items.begin(), out.items.end(),
                   [](const NewsItem& a, const NewsItem& b) { return a.timestamp < b.timestamp; });
  return out;
}

std::vector<NewsItem> news_window(std::span<const NewsItem> items, const std::string& symbol, Timestamp now,
                                  std::size_t max_items) {
  std::vector<NewsItem> out;
  for (const auto& item : items) {
    if (item.symbol == symbol && item.timestamp <= now) out.push_back(item);
  }
  if (out.size() > max_items) out.erase(out.begin(), out.end() - static_cast<std::ptrdiff_t>(max_items));
  return out;
}

}  // namespace tradekit::ingest
