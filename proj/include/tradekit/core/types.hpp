#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tradekit/core/time.hpp"

namespace tradekit {

struct Bar {
  Timestamp timestamp{};
  double open = 0.0;
  double high = 0.0;
  double low = 0.0;
  double close = 0.0;
  double volume = 0.0;
  std::optional<double> adjusted_close;

  /// Execution/marking price: adjusted close when supplied, else close.
  double price() const noexcept { return adjusted_close.value_or(close); }

  bool operator==(const Bar&) const = default;
};

/// Bars for one symbol with strictly increasing timestamps.
class AssetSeries {
 public:
  AssetSeries() = default;
  /// Throws ValidationError on non-increasing or duplicate timestamps.
  AssetSeries(std::string symbol, std::vector<Bar> bars);

  const std::string& symbol() const noexcept { return symbol_; }
  std::span<const Bar> bars() const noexcept { return bars_; }
  const Bar& operator[](std::size_t i) const { return bars_[i]; }
  std::size_t size() const noexcept { return bars_.size(); }
  bool empty() const noexcept { return bars_.empty(); }

  std::vector<Timestamp> timestamps() const;
  std::vector<double> closes() const;

  /// Bars [begin, end) as a new series.
  AssetSeries slice(std::size_t begin, std::size_t end) const;

  bool operator==(const AssetSeries&) const = default;

 private:
  std::string symbol_;
  std::vector<Bar> bars_;
};

enum class BarField : std::size_t { kOpen = 0, kHigh, kLow, kClose, kVolume, kAdjClose };
inline constexpr std::size_t kBarFieldCount = 6;

/// Calendar-aligned collection of N symbols over T timestamps.
/// values are stored [asset][time][field]; mask marks cells that hold a bar.
class Panel {
 public:
  Panel() = default;
  Panel(std::vector<std::string> symbols, std::vector<Timestamp> calendar);

  std::size_t num_assets() const noexcept { return symbols_.size(); }
  std::size_t num_times() const noexcept { return calendar_.size(); }
  const std::vector<std::string>& symbols() const noexcept { return symbols_; }
  const std::vector<Timestamp>& calendar() const noexcept { return calendar_; }

  bool present(std::size_t asset, std::size_t t) const { return mask_[asset * num_times() + t] != 0; }
  double value(std::size_t asset, std::size_t t, BarField f) const {
    return values_[index(asset, t, f)];
  }
  double close(std::size_t asset, std::size_t t) const { return value(asset, t, BarField::kClose); }
  double price(std::size_t asset, std::size_t t) const;

  std::optional<Bar> bar(std::size_t asset, std::size_t t) const;
  void set_bar(std::size_t asset, std::size_t t, const Bar& bar);

  /// Present bars of one asset, in calendar order.
  AssetSeries series(std::size_t asset) const;
  std::optional<std::size_t> asset_index(const std::string& symbol) const;

 private:
  std::size_t index(std::size_t asset, std::size_t t, BarField f) const {
    return (asset * num_times() + t) * kBarFieldCount + static_cast<std::size_t>(f);
  }

  std::vector<std::string> symbols_;
  std::vector<Timestamp> calendar_;
  std::vector<double> values_;
  std::vector<std::uint8_t> mask_;
  std::vector<std::uint8_t> adj_mask_;
};

struct NewsItem {
  Timestamp timestamp{};
  std::string symbol;
  std::string title;
  std::string content;

  bool operator==(const NewsItem&) const = default;
};

/// Rows with timestamp < train_end are train, the rest test.
struct SplitSpec {
  Timestamp train_end{};
};

/// Index of the first test row of `calendar`; throws DataError when
/// train_end lies outside the calendar range.
std::size_t split_index(std::span<const Timestamp> calendar, const SplitSpec& split);

/// Dense per-asset feature table: T rows by F named columns, row-major,
/// with per-cell validity. Invalid cells hold 0.
struct FeatureMatrix {
  std::string symbol;
  std::vector<Timestamp> calendar;
  std::vector<std::string> columns;
  std::vector<double> values;
  std::vector<std::uint8_t> valid;

  FeatureMatrix() = default;
  FeatureMatrix(std::string symbol, std::vector<Timestamp> calendar, std::vector<std::string> columns);

  std::size_t rows() const noexcept { return calendar.size(); }
  std::size_t cols() const noexcept { return columns.size(); }
  double at(std::size_t row, std::size_t col) const { return values[row * cols() + col]; }
  bool is_valid(std::size_t row, std::size_t col) const { return valid[row * cols() + col] != 0; }
  void set(std::size_t row, std::size_t col, std::optional<double> v) {
    values[row * cols() + col] = v.value_or(0.0);
    valid[row * cols() + col] = v.has_value() ? 1 : 0;
  }
  std::optional<std::size_t> column_index(const std::string& name) const;

  bool operator==(const FeatureMatrix&) const = default;
};

/// OHLCV (+ adjusted close) of a single series as a feature table.
FeatureMatrix bar_features(const AssetSeries& series);

}  // namespace tradekit
