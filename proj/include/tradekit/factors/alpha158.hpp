#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tradekit/core/types.hpp"

namespace tradekit::factors {

/// Per-asset factor table (T rows x 9 + 27*|windows| + 1 columns).
using FactorMatrix = FeatureMatrix;

/// Rolling window lengths; strictly increasing, each >= 2.
class WindowSet {
 public:
  explicit WindowSet(std::vector<int> windows);

  /// {5, 10, 20, 30, 60}: 9 + 27*5 + 1 = 145 columns.
  static WindowSet standard();

  std::span<const int> windows() const noexcept { return windows_; }
  std::size_t size() const noexcept { return windows_.size(); }
  int max() const noexcept { return windows_.back(); }
  bool operator==(const WindowSet&) const = default;

 private:
  std::vector<int> windows_;
};

enum class Family : std::uint8_t {
  kRoc, kMa, kStd, kBeta, kMax, kMin, kQtlu, kQtld, kRank,
  kImax, kImin, kImxd,
  kRsv, kCntp, kCntn, kCntd,
  kCorr, kCord,
  kSump, kSumn, kSumd,
  kVma, kVstd, kWvma, kVsump, kVsumn, kVsumd,
};

/// The 27 rolling families in canonical column order.
inline constexpr std::array<Family, 27> kRollingFamilies = {
    Family::kRoc,  Family::kMa,   Family::kStd,   Family::kBeta,  Family::kMax,  Family::kMin,  Family::kQtlu,
    Family::kQtld, Family::kRank, Family::kImax,  Family::kImin,  Family::kImxd, Family::kRsv,  Family::kCntp,
    Family::kCntn, Family::kCntd, Family::kCorr,  Family::kCord,  Family::kSump, Family::kSumn, Family::kSumd,
    Family::kVma,  Family::kVstd, Family::kWvma,  Family::kVsump, Family::kVsumn, Family::kVsumd,
};

inline constexpr std::array<std::string_view, 9> kKbarColumns = {
    "kmid", "kmid2", "klen", "kup", "kup2", "klow", "klow2", "ksft", "ksft2"};

std::string_view family_name(Family f);

/// Canonical column order: kbar block, each family x each window, logvol.
std::vector<std::string> alpha158_columns(const WindowSet& windows);

/// Shortest series accepted by compute_alpha158: max window + 1.
std::size_t alpha158_min_length(const WindowSet& windows);

enum class ExecPolicy { kSerial, kParallel };

/// One computed column; invalid cells hold 0.
struct Column {
  std::string name;
  std::vector<double> values;
  std::vector<std::uint8_t> valid;

  bool is_valid(std::size_t t) const { return valid[t] != 0; }
};

// Family groups. Each returns its columns for every row of `series`.
// Rows inside the warm-up or with a zero denominator are invalid.

std::vector<Column> kbar_features(const AssetSeries& series);
/// roc, ma, std, beta, max, min, qtlu, qtld, rank
std::vector<Column> rolling_price_features(const AssetSeries& series, int w);
/// imax, imin, imxd
std::vector<Column> position_features(const AssetSeries& series, int w);
/// rsv, cntp, cntn, cntd
std::vector<Column> rsv_count_features(const AssetSeries& series, int w);
/// corr, cord
std::vector<Column> correlation_features(const AssetSeries& series, int w);
/// sump, sumn, sumd
std::vector<Column> sum_features(const AssetSeries& series, int w);
/// vma, vstd, wvma, vsump, vsumn, vsumd
std::vector<Column> volume_features(const AssetSeries& series, int w);
Column logvol_feature(const AssetSeries& series);

/// Full factor table. Throws ValidationError on invalid bars and DataError
/// when the series is shorter than alpha158_min_length. kParallel spreads
/// (family, window) columns over OpenMP threads; results are bit-identical
/// to kSerial for any thread count.
FactorMatrix compute_alpha158(const AssetSeries& series, const WindowSet& windows = WindowSet::standard(),
                              ExecPolicy policy = ExecPolicy::kParallel);

/// compute_alpha158 over many assets. kParallel maps assets over threads.
std::vector<FactorMatrix> compute_alpha158_panel(std::span<const AssetSeries> series,
                                                 const WindowSet& windows = WindowSet::standard(),
                                                 ExecPolicy policy = ExecPolicy::kParallel);

}  // namespace tradekit::factors
