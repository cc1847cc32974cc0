#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "tradekit/factors/alpha158.hpp"

namespace tradekit::factors {

/// Header "timestamp,<columns...>"; invalid cells are left empty so validity
/// survives a round trip. Numbers use shortest round-trip formatting.
std::string factor_csv(const FactorMatrix& m);
FactorMatrix parse_factor_csv(std::string_view bytes, std::string symbol);

/// Columnar binary cache of factor tables keyed by
/// (symbol, series digest, window set). Stored tables reload bit-identically.
class FactorCache {
 public:
  explicit FactorCache(std::filesystem::path dir);

  static std::string key(const std::string& symbol, const std::string& data_digest, const WindowSet& windows);

  std::optional<FactorMatrix> load(const std::string& key) const;
  void store(const std::string& key, const FactorMatrix& m) const;

  const std::filesystem::path& dir() const noexcept { return dir_; }

 private:
  std::filesystem::path path_for(const std::string& key) const;
  std::filesystem::path dir_;
};

struct CachedFactors {
  FactorMatrix matrix;
  bool cache_hit = false;
};

/// compute_alpha158 behind the cache.
CachedFactors compute_alpha158_cached(const AssetSeries& series, const WindowSet& windows, const FactorCache& cache,
                                      ExecPolicy policy = ExecPolicy::kParallel);

}  // namespace tradekit::factors
