#include <gtest/gtest.h>

#include "oracles.hpp"
#include "tradekit/core/digest.hpp"
#include "tradekit/core/errors.hpp"
#include "tradekit/core/returns.hpp"
#include "tradekit/core/text.hpp"
#include "tradekit/core/time.hpp"
#include "tradekit/core/types.hpp"
#include "tradekit/core/validation.hpp"

using namespace tradekit;

namespace {

Bar bar(int day, double close) {
  return Bar{make_date(2023, 5, 1) + std::chrono::days(day), close, close + 1, close - 1, close, 10, std::nullopt};
}

Panel panel_of(const std::vector<std::vector<double>>& closes) {
  std::vector<Timestamp> cal;
  for (std::size_t t = 0; t < closes[0].size(); ++t) cal.push_back(bar(static_cast<int>(t), 1).timestamp);
  std::vector<std::string> syms;
  for (std::size_t i = 0; i < closes.size(); ++i) syms.push_back("S" + std::to_string(i));
  Panel p(syms, cal);
  for (std::size_t i = 0; i < closes.size(); ++i) {
    for (std::size_t t = 0; t < closes[i].size(); ++t) p.set_bar(i, t, bar(static_cast<int>(t), closes[i][t]));
  }
  return p;
}

}  // namespace

TEST(Time, ParseAndFormat) {
  EXPECT_EQ(format_timestamp(parse_timestamp("2023-05-01")), "2023-05-01");
  EXPECT_EQ(format_timestamp(parse_timestamp("2023-05-01T09:31:00Z")), "2023-05-01 09:31:00");
  EXPECT_EQ(format_timestamp(parse_timestamp("2023-05-01T11:31:00+02:00")), "2023-05-01 09:31:00");
  EXPECT_THROW(parse_timestamp("2023-13-01"), ParseError);
  EXPECT_THROW(parse_timestamp("yesterday"), ParseError);
}

TEST(Time, TemporalFeatures) {
  const auto a = temporal_features(make_date(2023, 5, 1));
  EXPECT_EQ(a.day, 1);
  EXPECT_EQ(a.month, 5);
  EXPECT_EQ(a.weekday, 0);
  EXPECT_EQ(a.year, 2023);
  const auto b = temporal_features(make_date(2024, 2, 29));
  EXPECT_EQ(b.day, 29);
  EXPECT_EQ(b.month, 2);
  EXPECT_EQ(b.year, 2024);
  EXPECT_EQ(temporal_features(make_date(1995, 5, 1)).year, 1995);
}

TEST(Time, TemporalFeaturesMatchCivilCalendar) {
  // Walk day by day from a known Monday, tracking the civil calendar by hand.
  const int month_len[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  int y = 2000, m = 1, d = 3, wd = 0;  // 2000-01-03 was a Monday
  Timestamp ts = make_date(2000, 1, 3);
  for (int i = 0; i < 3000; ++i) {
    const auto f = temporal_features(ts);
    ASSERT_EQ(f.year, y);
    ASSERT_EQ(f.month, m);
    ASSERT_EQ(f.day, d);
    ASSERT_EQ(f.weekday, wd);
    ts += std::chrono::days(1);
    wd = (wd + 1) % 7;
    const bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
    const int len = m == 2 && leap ? 29 : month_len[m - 1];
    if (++d > len) {
      d = 1;
      if (++m > 12) {
        m = 1;
        ++y;
      }
    }
  }
}

TEST(Time, Granularity) {
  const std::vector<Timestamp> daily = {make_date(2023, 1, 2), make_date(2023, 1, 3)};
  EXPECT_EQ(granularity_of(daily), Granularity::kDaily);
  const std::vector<Timestamp> intraday = {parse_timestamp("2023-01-02T09:30:00Z")};
  EXPECT_EQ(granularity_of(intraday), Granularity::kIntraday);
}

TEST(RelativeReturns, ConstantIsZero) {
  const auto r = compute_relative_returns(panel_of({{5, 5, 5}, {7, 7, 7}}), 0, 2);
  for (double v : r.values) EXPECT_EQ(v, 0.0);
}

TEST(RelativeReturns, HandArithmetic) {
  const auto r = compute_relative_returns(panel_of({{100, 110}}), 0, 1);
  EXPECT_NEAR(*r.at(0, 0), 0.10, 1e-15);
}

TEST(RelativeReturns, ErrorsAndMask) {
  EXPECT_THROW(compute_relative_returns(panel_of({{100, 110}}), 1, 1), DataError);
  auto p = panel_of({{100, 110, 120}});
  Panel q(p.symbols(), p.calendar());
  q.set_bar(0, 0, *p.bar(0, 0));
  q.set_bar(0, 2, *p.bar(0, 2));
  const auto r = compute_relative_returns(q, 0, 2);
  EXPECT_FALSE(r.at(0, 0).has_value());
  EXPECT_DOUBLE_EQ(*r.at(0, 1), 0.2);
}

TEST(RelativeReturns, ScaleInvariant) {
  const auto a = compute_relative_returns(panel_of({{3, 4.5, 2.25, 9}}), 0, 3);
  const auto b = compute_relative_returns(panel_of({{6, 9, 4.5, 18}}), 0, 3);
  EXPECT_EQ(a.values, b.values);
}

TEST(Panel, RoundTrip) {
  const auto p = panel_of({{1, 2, 3}, {4, 5, 6}});
  const auto s = p.series(1);
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s[2], bar(2, 6));
  EXPECT_EQ(p.asset_index("S1"), 1u);
  EXPECT_FALSE(p.asset_index("nope").has_value());
}

TEST(Validation, CleanSeriesUnchanged) {
  const AssetSeries s("X", {bar(0, 10), bar(1, 11), bar(2, 12)});
  for (auto pol : {ViolationPolicy::kReject, ViolationPolicy::kDrop, ViolationPolicy::kFlag}) {
    const auto [out, rep] = validate_bars(s, pol);
    EXPECT_EQ(out, s);
    EXPECT_TRUE(rep.empty());
  }
}

TEST(Validation, DropAndReject) {
  Bar bad = bar(1, 11);
  bad.high = 10.5;  // below close
  const AssetSeries s("X", {bar(0, 10), bad, bar(2, 12)});
  const auto [dropped, rep] = validate_bars(s, ViolationPolicy::kDrop);
  EXPECT_EQ(dropped.size(), 2u);
  EXPECT_EQ(rep.violations.size(), 1u);
  EXPECT_EQ(validate_bars(dropped, ViolationPolicy::kDrop).first, dropped);  // idempotent

  Bar neg = bar(1, 11);
  neg.volume = -1;
  try {
    validate_bars(AssetSeries("X", {bar(0, 10), neg}), ViolationPolicy::kReject);
    FAIL();
  } catch (const ValidationError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("volume"), std::string::npos);
    EXPECT_NE(what.find("2023-05-02"), std::string::npos);
  }
}

TEST(Series, RejectsUnorderedOrDuplicate) {
  EXPECT_THROW(AssetSeries("X", std::vector<Bar>{bar(1, 1), bar(0, 1)}), Error);
  EXPECT_THROW(AssetSeries("X", std::vector<Bar>{bar(1, 1), bar(1, 1)}), Error);
}

TEST(Split, Index) {
  const std::vector<Timestamp> cal = {make_date(2023, 4, 28), make_date(2023, 5, 1), make_date(2023, 5, 2)};
  EXPECT_EQ(split_index(cal, {make_date(2023, 5, 1)}), 1u);
  EXPECT_EQ(split_index(cal, {make_date(2023, 4, 30)}), 1u);
  EXPECT_THROW(split_index(cal, {make_date(2023, 4, 1)}), DataError);
}

TEST(Text, Helpers) {
  EXPECT_EQ(trim("  a b \n"), "a b");
  EXPECT_EQ(split_csv_line("a,\"b,c\",d"), (std::vector<std::string>{"a", "b,c", "d"}));
  EXPECT_EQ(parse_double("1.5"), 1.5);
  EXPECT_FALSE(parse_double("1.5x").has_value());
  EXPECT_EQ(format_fixed(13.062, 4), "13.0620");
  EXPECT_EQ(*parse_double(format_shortest(0.1 + 0.2)), 0.1 + 0.2);
}

TEST(Digest, Sha256KnownVector) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  const auto s = oracle::make_path({});
  EXPECT_EQ(series_digest(s), series_digest(s));
  EXPECT_NE(series_digest(s), series_digest(s.slice(0, 10)));
}
