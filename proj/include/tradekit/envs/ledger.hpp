#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tradekit/envs/trading_env.hpp"

namespace tradekit::envs {

/// Column order of a trading ledger; matches StepRecord.
inline constexpr std::string_view kLedgerHeader =
    "timestamp,open,high,low,close,volume,price,cash,position,pre_value,action,post_value,ret";

/// CSV with shortest round-trip numbers, so parse_ledger_csv restores every
/// field bit-exactly.
std::string ledger_csv(std::span<const StepRecord> records);
std::vector<StepRecord> parse_ledger_csv(std::string_view bytes);

/// Reads only the `ret` column; works for trading and portfolio ledgers.
std::vector<double> ledger_returns(std::string_view bytes);

}  // namespace tradekit::envs
