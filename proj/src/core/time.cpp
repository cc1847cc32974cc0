#include "tradekit/core/time.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>

#include "tradekit/core/errors.hpp"

namespace tradekit {

namespace {

using namespace std::chrono;

[[noreturn]] void bad_timestamp(std::string_view text, const char* why) {
  throw ParseError("invalid timestamp '" + std::string(text) + "': " + why);
}

int read_fixed(std::string_view text, std::size_t pos, std::size_t width,
               std::string_view whole) {
  if (pos + width > text.size()) bad_timestamp(whole, "truncated");
  int value = 0;
  for (std::size_t i = pos; i < pos + width; ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) bad_timestamp(whole, "expected digit");
    value = value * 10 + (text[i] - '0');
  }
  return value;
}

void expect(std::string_view text, std::size_t pos, char c, std::string_view whole) {
  if (pos >= text.size() || text[pos] != c) bad_timestamp(whole, "unexpected separator");
}

}  // namespace

Timestamp make_date(int year, unsigned month, unsigned day) {
  const year_month_day ymd{std::chrono::year{year}, std::chrono::month{month}, std::chrono::day{day}};
  if (!ymd.ok()) throw ParseError("invalid calendar date");
  return Timestamp{sys_days{ymd}};
}

Timestamp parse_timestamp(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.size() < 10) bad_timestamp(text, "too short");

  const int y = read_fixed(s, 0, 4, text);
  expect(s, 4, '-', text);
  const int mo = read_fixed(s, 5, 2, text);
  expect(s, 7, '-', text);
  const int d = read_fixed(s, 8, 2, text);
  const year_month_day ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(mo)},
                           std::chrono::day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) bad_timestamp(text, "not a calendar date");
  Timestamp ts{sys_days{ymd}};
  if (s.size() == 10) return ts;

  if (s[10] != 'T' && s[10] != ' ') bad_timestamp(text, "expected 'T' or space after date");
  const int hh = read_fixed(s, 11, 2, text);
  expect(s, 13, ':', text);
  const int mm = read_fixed(s, 14, 2, text);
  int ss = 0;
  std::size_t pos = 16;
  if (pos < s.size() && s[pos] == ':') {
    ss = read_fixed(s, pos + 1, 2, text);
    pos += 3;
    if (pos < s.size() && s[pos] == '.') {
      ++pos;
      while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    }
  }
  if (hh > 23 || mm > 59 || ss > 60) bad_timestamp(text, "time of day out of range");
  ts += hours{hh} + minutes{mm} + seconds{ss};

  if (pos == s.size()) return ts;
  if (s[pos] == 'Z' && pos + 1 == s.size()) return ts;
  if ((s[pos] == '+' || s[pos] == '-') && s.size() == pos + 6) {
    const int oh = read_fixed(s, pos + 1, 2, text);
    expect(s, pos + 3, ':', text);
    const int om = read_fixed(s, pos + 4, 2, text);
    const seconds offset = hours{oh} + minutes{om};
    return s[pos] == '+' ? ts - offset : ts + offset;
  }
  bad_timestamp(text, "trailing characters");
}

std::string format_datetime(Timestamp ts) {
  const auto day = floor<days>(ts);
  const year_month_day ymd{day};
  const hh_mm_ss tod{ts - day};
  char buf[96];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u %02lld:%02lld:%02lld", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<long long>(tod.hours().count()),
                static_cast<long long>(tod.minutes().count()),
                static_cast<long long>(tod.seconds().count()));
  return buf;
}

std::string format_timestamp(Timestamp ts) {
  std::string full = format_datetime(ts);
  if (full.compare(10, 9, " 00:00:00") == 0) full.resize(10);
  return full;
}

Granularity granularity_of(std::span<const Timestamp> stamps) {
  for (const auto ts : stamps) {
    if (ts != floor<days>(ts)) return Granularity::kIntraday;
  }
  return Granularity::kDaily;
}

TemporalFeatures temporal_features(Timestamp ts) {
  const auto day = floor<days>(ts);
  const year_month_day ymd{day};
  // iso_encoding: Monday = 1 ... Sunday = 7
  const weekday wd{day};
  return TemporalFeatures{
      .day = static_cast<int>(static_cast<unsigned>(ymd.day())),
      .month = static_cast<int>(static_cast<unsigned>(ymd.month())),
      .weekday = static_cast<int>(wd.iso_encoding()) - 1,
      .year = static_cast<int>(ymd.year()),
  };
}

}  // namespace tradekit
