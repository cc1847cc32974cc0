#include "tradekit/ingest/csv.hpp"

#include <algorithm>
#include <array>
#include <optional>

#include "tradekit/core/errors.hpp"
#include "tradekit/core/text.hpp"

namespace tradekit::ingest {

namespace {

enum Col { kTs, kOpen, kHigh, kLow, kClose, kVolume, kAdj, kNumCols };

constexpr std::array<const char*, kNumCols> kColNames = {"timestamp", "open",   "high",          "low",
                                                         "close",     "volume", "adjusted_close"};

std::optional<Col> classify(std::string_view header) {
  const std::string h = to_lower(trim(header));
  if (h == "adj_close" || h == "adjclose") return kAdj;
  for (int c = 0; c < kNumCols; ++c) {
    if (h == kColNames[c]) return static_cast<Col>(c);
  }
  if (h == "date" || h == "datetime" || h == "time") return kTs;
  return std::nullopt;
}

}  // namespace

AssetSeries parse_ohlcv_csv(std::string_view bytes, std::string symbol) {
  if (bytes.size() >= 3 && static_cast<unsigned char>(bytes[0]) == 0xEF &&
      static_cast<unsigned char>(bytes[1]) == 0xBB && static_cast<unsigned char>(bytes[2]) == 0xBF) {
    bytes.remove_prefix(3);
  }
  const auto lines = split_lines(bytes);
  if (lines.empty()) throw ParseError("csv for " + symbol + ": missing header row");

  std::array<int, kNumCols> pos;
  pos.fill(-1);
  const auto header = split_csv_line(lines[0]);
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (auto c = classify(header[i]); c && pos[*c] < 0) pos[*c] = static_cast<int>(i);
  }
  for (int c = 0; c < kAdj; ++c) {
    if (pos[c] < 0) throw ParseError("csv for " + symbol + ": missing required column '" + kColNames[c] + "'");
  }

  std::vector<Bar> bars;
  bars.reserve(lines.size() - 1);
  for (std::size_t li = 1; li < lines.size(); ++li) {
    if (trim(lines[li]).empty()) continue;
    const auto fields = split_csv_line(lines[li]);
    const std::size_t row = li + 1;
    auto field = [&](int c) -> std::string_view {
      const auto idx = static_cast<std::size_t>(pos[c]);
      if (idx >= fields.size()) {
        throw ParseError("csv for " + symbol + ": row " + std::to_string(row) + " is missing column " +
                         kColNames[c]);
      }
      return fields[idx];
    };
    auto number = [&](int c) {
      const auto v = parse_double(field(c));
      if (!v) {
        throw ParseError("csv for " + symbol + ": row " + std::to_string(row) + ", column " + kColNames[c] +
                         ": cannot parse '" + std::string(field(c)) + "' as a number");
      }
      return *v;
    };

    Bar b;
    try {
      b.timestamp = parse_timestamp(field(kTs));
    } catch (const ParseError& e) {
      throw ParseError("csv for " + symbol + ": row " + std::to_string(row) + ", column timestamp: " + e.what());
    }
    b.open = number(kOpen);
    b.high = number(kHigh);
    b.low = number(kLow);
    b.close = number(kClose);
    b.volume = number(kVolume);
    if (pos[kAdj] >= 0 && !trim(field(kAdj)).empty()) b.adjusted_close = number(kAdj);
    bars.push_back(b);
  }

  std::stable_sort(bars.begin(), bars.end(),
                   [](const Bar& a, const Bar& b) { return a.timestamp < b.timestamp; });
  for (std::size_t i = 1; i < bars.size(); ++i) {
    if (bars[i].timestamp == bars[i - 1].timestamp) {
      throw ParseError("csv for " + symbol + ": duplicate timestamp " + format_timestamp(bars[i].timestamp));
    }
  }
  return AssetSeries(std::move(symbol), std::move(bars));
}

std::string serialize_ohlcv_csv(const AssetSeries& series) {
  const bool with_adj = std::any_of(series.bars().begin(), series.bars().end(),
                                    [](const Bar& b) { return b.adjusted_close.has_value(); });
  std::string out = "timestamp,open,high,low,close,volume";
  if (with_adj) out += ",adjusted_close";
  out += '\n';
  for (const Bar& b : series.bars()) {
    out += format_timestamp(b.timestamp);
    for (double v : {b.open, b.high, b.low, b.close, b.volume}) {
      out += ',';
      out += format_shortest(v);
    }
    if (with_adj) {
      out += ',';
      if (b.adjusted_close) out += format_shortest(*b.adjusted_close);
    }
    out += '\n';
  }
  return out;
}

}  // namespace tradekit::ingest
