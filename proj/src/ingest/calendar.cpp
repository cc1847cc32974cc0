#include "tradekit/ingest/calendar.hpp"

#include <algorithm>
#include <optional>
#include <set>

#include "tradekit/core/errors.hpp"

namespace tradekit::ingest {

Panel align_calendar(std::span<const AssetSeries> series) {
  std::optional<Granularity> granularity;
  std::set<std::string> seen;
  std::vector<Timestamp> calendar;
  for (const auto& s : series) {
    if (!seen.insert(s.symbol()).second) throw DataError("align_calendar: duplicate symbol " + s.symbol());
    const auto stamps = s.timestamps();
    if (stamps.empty()) continue;
    const Granularity g = granularity_of(stamps);
    if (granularity && *granularity != g) {
      throw DataError("align_calendar: series " + s.symbol() + " mixes daily and intraday granularity with the rest");
    }
    granularity = g;
    calendar.insert(calendar.end(), stamps.begin(), stamps.end());
  }
  std::sort(calendar.begin(), calendar.end());
  calendar.erase(std::unique(calendar.begin(), calendar.end()), calendar.end());

  std::vector<std::string> symbols;
  symbols.reserve(series.size());
  for (const auto& s : series) symbols.push_back(s.symbol());

  Panel panel(std::move(symbols), calendar);
  for (std::size_t a = 0; a < series.size(); ++a) {
    std::size_t t = 0;
    for (const Bar& b : series[a].bars()) {
      while (calendar[t] < b.timestamp) ++t;
      panel.set_bar(a, t, b);
    }
  }
  return panel;
}

}  // namespace tradekit::ingest
