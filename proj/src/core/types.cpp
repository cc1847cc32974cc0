#include "tradekit/core/types.hpp"

#include <algorithm>

#include "tradekit/core/errors.hpp"

namespace tradekit {

AssetSeries::AssetSeries(std::string symbol, std::vector<Bar> bars)
    : symbol_(std::move(symbol)), bars_(std::move(bars)) {
  for (std::size_t i = 1; i < bars_.size(); ++i) {
    if (!(bars_[i - 1].timestamp < bars_[i].timestamp)) {
      throw ValidationError("series " + symbol_ + ": timestamps not strictly increasing at " +
                            format_timestamp(bars_[i].timestamp));
    }
  }
}

std::vector<Timestamp> AssetSeries::timestamps() const {
  std::vector<Timestamp> out;
  out.reserve(bars_.size());
  for (const auto& b : bars_) out.push_back(b.timestamp);
  return out;
}

std::vector<double> AssetSeries::closes() const {
  std::vector<double> out;
  out.reserve(bars_.size());
  for (const auto& b : bars_) out.push_back(b.close);
  return out;
}

AssetSeries AssetSeries::slice(std::size_t begin, std::size_t end) const {
  end = std::min(end, bars_.size());
  begin = std::min(begin, end);
  return AssetSeries(symbol_, std::vector<Bar>(bars_.begin() + static_cast<std::ptrdiff_t>(begin),
                                               bars_.begin() + static_cast<std::ptrdiff_t>(end)));
}

Panel::Panel(std::vector<std::string> symbols, std::vector<Timestamp> calendar)
    : symbols_(std::move(symbols)), calendar_(std::move(calendar)) {
  for (std::size_t i = 1; i < calendar_.size(); ++i) {
    if (!(calendar_[i - 1] < calendar_[i])) throw ValidationError("panel calendar not strictly increasing");
  }
  const std::size_t cells = symbols_.size() * calendar_.size();
  values_.assign(cells * kBarFieldCount, 0.0);
  mask_.assign(cells, 0);
  adj_mask_.assign(cells, 0);
}

double Panel::price(std::size_t asset, std::size_t t) const {
  return adj_mask_[asset * num_times() + t] ? value(asset, t, BarField::kAdjClose)
                                            : value(asset, t, BarField::kClose);
}

std::optional<Bar> Panel::bar(std::size_t asset, std::size_t t) const {
  if (!present(asset, t)) return std::nullopt;
  Bar b;
  b.timestamp = calendar_[t];
  b.open = value(asset, t, BarField::kOpen);
  b.high = value(asset, t, BarField::kHigh);
  b.low = value(asset, t, BarField::kLow);
  b.close = value(asset, t, BarField::kClose);
  b.volume = value(asset, t, BarField::kVolume);
  if (adj_mask_[asset * num_times() + t]) b.adjusted_close = value(asset, t, BarField::kAdjClose);
  return b;
}

void Panel::set_bar(std::size_t asset, std::size_t t, const Bar& bar) {
  values_[index(asset, t, BarField::kOpen)] = bar.open;
  values_[index(asset, t, BarField::kHigh)] = bar.high;
  values_[index(asset, t, BarField::kLow)] = bar.low;
  values_[index(asset, t, BarField::kClose)] = bar.close;
  values_[index(asset, t, BarField::kVolume)] = bar.volume;
  values_[index(asset, t, BarField::kAdjClose)] = bar.adjusted_close.value_or(0.0);
  mask_[asset * num_times() + t] = 1;
  adj_mask_[asset * num_times() + t] = bar.adjusted_close.has_value() ? 1 : 0;
}

AssetSeries Panel::series(std::size_t asset) const {
  std::vector<Bar> bars;
  for (std::size_t t = 0; t < num_times(); ++t) {
    if (auto b = bar(asset, t)) bars.push_back(*b);
  }
  return AssetSeries(symbols_.at(asset), std::move(bars));
}

std::optional<std::size_t> Panel::asset_index(const std::string& symbol) const {
  const auto it = std::find(symbols_.begin(), symbols_.end(), symbol);
  if (it == symbols_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - symbols_.begin());
}

std::size_t split_index(std::span<const Timestamp> calendar, const SplitSpec& split) {
  if (calendar.empty()) throw DataError("split: empty calendar");
  if (split.train_end <= calendar.front() || split.train_end > calendar.back()) {
    throw DataError("split boundary " + format_timestamp(split.train_end) + " outside calendar range [" +
                    format_timestamp(calendar.front()) + ", " + format_timestamp(calendar.back()) + "]");
  }
  const auto it = std::lower_bound(calendar.begin(), calendar.end(), split.train_end);
  return static_cast<std::size_t>(it - calendar.begin());
}

FeatureMatrix::FeatureMatrix(std::string sym, std::vector<Timestamp> cal, std::vector<std::string> cols)
    : symbol(std::move(sym)), calendar(std::move(cal)), columns(std::move(cols)) {
  values.assign(calendar.size() * columns.size(), 0.0);
  valid.assign(calendar.size() * columns.size(), 0);
}

std::optional<std::size_t> FeatureMatrix::column_index(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) return std::nullopt;
  return static_cast<std::size_t>(it - columns.begin());
}

FeatureMatrix bar_features(const AssetSeries& series) {
  FeatureMatrix m(series.symbol(), series.timestamps(), {"open", "high", "low", "close", "volume"});
  for (std::size_t t = 0; t < series.size(); ++t) {
    const Bar& b = series[t];
    m.set(t, 0, b.open);
    m.set(t, 1, b.high);
    m.set(t, 2, b.low);
    m.set(t, 3, b.close);
    m.set(t, 4, b.volume);
  }
  return m;
}

}  // namespace tradekit
