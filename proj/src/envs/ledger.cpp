#include "tradekit/envs/ledger.hpp"

#include <algorithm>

#include "tradekit/core/errors.hpp"
#include "tradekit/core/text.hpp"

namespace tradekit::envs {

std::string ledger_csv(std::span<const StepRecord> records) {
  std::string out(kLedgerHeader);
  out += '\n';
  for (const auto& r : records) {
    out += format_timestamp(r.timestamp);
    for (double v : {r.open, r.high, r.low, r.close, r.volume, r.price, r.cash, r.position, r.pre_value}) {
      out += ',';
      out += format_shortest(v);
    }
    out += ',';
    out += to_string(r.action);
    out += ',';
    out += format_shortest(r.post_value);
    out += ',';
    out += format_shortest(r.ret);
    out += '\n';
  }
  return out;
}

std::vector<StepRecord> parse_ledger_csv(std::string_view bytes) {
  const auto lines = split_lines(bytes);
  if (lines.empty() || trim(lines[0]) != kLedgerHeader) throw ParseError("ledger: unexpected header");
  std::vector<StepRecord> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = split_csv_line(lines[i]);
    if (f.size() != 13) throw ParseError("ledger: row " + std::to_string(i + 1) + " has wrong field count");
    auto num = [&](std::size_t k) {
      const auto v = parse_double(f[k]);
      if (!v) throw ParseError("ledger: row " + std::to_string(i + 1) + ", field " + std::to_string(k + 1));
      return *v;
    };
    StepRecord r;
    r.timestamp = parse_timestamp(f[0]);
    r.open = num(1);
    r.high = num(2);
    r.low = num(3);
    r.close = num(4);
    r.volume = num(5);
    r.price = num(6);
    r.cash = num(7);
    r.position = num(8);
    r.pre_value = num(9);
    const auto a = parse_action(trim(f[10]));
    if (!a) throw ParseError("ledger: row " + std::to_string(i + 1) + " has unknown action");
    r.action = *a;
    r.post_value = num(11);
    r.ret = num(12);
    out.push_back(r);
  }
  return out;
}

std::vector<double> ledger_returns(std::string_view bytes) {
  const auto lines = split_lines(bytes);
  if (lines.empty()) throw ParseError("ledger: empty file");
  const auto header = split_csv_line(lines[0]);
  const auto it = std::find_if(header.begin(), header.end(), [](const std::string& h) { return trim(h) == "ret"; });
  if (it == header.end()) throw ParseError("ledger: no 'ret' column");
  const auto col = static_cast<std::size_t>(it - header.begin());
  std::vector<double> rets;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = split_csv_line(lines[i]);
    if (col >= f.size()) throw ParseError("ledger: row " + std::to_string(i + 1) + " is short");
    const auto v = parse_double(f[col]);
    if (!v) throw ParseError("ledger: row " + std::to_string(i + 1) + " has a bad ret");
    rets.push_back(*v);
  }
  return rets;
}

}  // namespace tradekit::envs
