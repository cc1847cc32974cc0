#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "tradekit/core/errors.hpp"
#include "tradekit/envs/ledger.hpp"
#include "tradekit/envs/portfolio_env.hpp"
#include "tradekit/envs/prompt.hpp"
#include "tradekit/envs/trading_env.hpp"

using namespace tradekit;
using namespace tradekit::envs;

namespace {

AssetSeries prices(const std::vector<double>& closes) {
  std::vector<Bar> bars;
  for (std::size_t i = 0; i < closes.size(); ++i) {
    const double c = closes[i];
    bars.push_back({make_date(2023, 3, 1) + std::chrono::days(static_cast<long>(i)), c, c * 1.01, c * 0.99, c,
                    1000.0 + static_cast<double>(i), std::nullopt});
  }
  return AssetSeries("TST", std::move(bars));
}

TradingEnvConfig config_for(AssetSeries s, double fee = kDefaultFeeRate) {
  TradingEnvConfig c;
  c.series = std::move(s);
  c.fee_rate = fee;
  return c;
}

Panel two_asset_panel(const std::vector<double>& a, const std::vector<double>& b) {
  const auto sa = prices(a);
  Panel p({"A", "B"}, sa.timestamps());
  const auto sb = prices(b);
  for (std::size_t t = 0; t < a.size(); ++t) {
    p.set_bar(0, t, sa[t]);
    p.set_bar(1, t, sb[t]);
  }
  return p;
}

}  // namespace

TEST(TradingEnv, Defaults) {
  const auto cfg = config_for(prices({10, 11}));
  EXPECT_EQ(cfg.initial_cash, 1e5);
  EXPECT_EQ(cfg.fee_rate, 1e-4);
  const auto s = trading_reset(cfg);
  EXPECT_EQ(s.cash, 100000.0);
  EXPECT_EQ(s.position, 0.0);
  EXPECT_EQ(trading_reset(cfg), s);
  EXPECT_THROW(trading_reset(config_for(prices({}))), DataError);
}

TEST(TradingEnv, HoldFlat) {
  const auto cfg = config_for(prices({10, 10, 10}));
  const auto r = trading_step(cfg, trading_reset(cfg), Action::kHold);
  EXPECT_EQ(r.record.ret, 0.0);
  EXPECT_EQ(r.reward, 0.0);
}

TEST(TradingEnv, BuyArithmetic) {
  const auto cfg = config_for(prices({100, 100}));
  const auto r = trading_step(cfg, trading_reset(cfg), Action::kBuy);
  EXPECT_DOUBLE_EQ(r.state.position, 100000.0 / 100.01);
  EXPECT_EQ(r.state.cash, 0.0);
  EXPECT_NEAR(r.state.fees, 1e-4 * (100000.0 / 100.01) * 100.0, 1e-12);
  EXPECT_NEAR(r.state.fees, 9.9990, 1e-4);
}

TEST(TradingEnv, SellWithoutPositionIsHold) {
  const auto cfg = config_for(prices({100, 105, 103}));
  const auto s0 = trading_reset(cfg);
  const auto a = trading_step(cfg, s0, Action::kSell);
  const auto b = trading_step(cfg, s0, Action::kHold);
  EXPECT_EQ(a.state, b.state);
  EXPECT_EQ(a.state.t, 1u);
  // BUY then BUY: the second has no cash and acts as HOLD.
  const auto c = trading_step(cfg, s0, Action::kBuy);
  const auto d1 = trading_step(cfg, c.state, Action::kBuy);
  const auto d2 = trading_step(cfg, c.state, Action::kHold);
  EXPECT_EQ(d1.state, d2.state);
}

TEST(TradingEnv, StepPastEnd) {
  const auto cfg = config_for(prices({100, 101}));
  const auto r = trading_step(cfg, trading_reset(cfg), Action::kHold);
  EXPECT_THROW(trading_step(cfg, r.state, Action::kHold), DataError);
  EXPECT_EQ(remaining_steps(cfg, r.state), 0u);
}

TEST(EpisodeReturn, Examples) {
  TradingEnv flat(config_for(prices({5, 5, 5, 5})));
  while (!flat.done()) flat.step(Action::kHold);
  EXPECT_EQ(episode_return(flat.records()), 0.0);

  TradingEnv env(config_for(prices({100, 110, 110}), 0.0));
  env.step(Action::kBuy);
  env.step(Action::kSell);
  EXPECT_NEAR(episode_return(env.records()), 0.10, 1e-12);
  EXPECT_THROW(episode_return({}), DataError);
}

TEST(TradingEnv, RandomSequencesInvariants) {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> act(0, 2);
  for (int trial = 0; trial < 50; ++trial) {
    oracle::SyntheticPathSpec spec;
    spec.seed = 1000 + trial;
    spec.length = 120;
    const auto cfg = config_for(oracle::make_path(spec));
    TradingEnv env(cfg);
    double gains = 0.0;
    double prod = 1.0;
    while (!env.done()) {
      const auto before = env.state();
      const auto r = env.step(static_cast<Action>(act(rng)));
      ASSERT_GE(r.state.cash, 0.0);
      ASSERT_GE(r.state.position, 0.0);
      gains += r.state.position * (cfg.series[r.state.t].price() - cfg.series[before.t].price());
      prod *= 1.0 + r.record.ret;
      const double wealth = r.state.cash + r.state.position * cfg.series[r.state.t].price();
      ASSERT_NEAR(wealth + r.state.fees - cfg.initial_cash, gains, 1e-6);
    }
    ASSERT_NEAR(episode_return(env.records()), prod - 1.0, 1e-9);
  }
}

TEST(Ledger, RoundTripAndReturns) {
  TradingEnv env(config_for(prices({100, 101.5, 99.25, 102, 98})));
  const Action seq[] = {Action::kBuy, Action::kHold, Action::kSell, Action::kBuy};
  for (auto a : seq) env.step(a);
  const std::string csv = ledger_csv(env.records());
  EXPECT_EQ(csv.substr(0, kLedgerHeader.size()), kLedgerHeader);
  const auto back = parse_ledger_csv(csv);
  ASSERT_EQ(back.size(), 4u);
  for (std::size_t i = 0; i < back.size(); ++i) EXPECT_EQ(back[i], env.records()[i]);
  const auto rets = ledger_returns(csv);
  for (std::size_t i = 0; i < rets.size(); ++i) EXPECT_EQ(rets[i], env.records()[i].ret);
  EXPECT_THROW(parse_ledger_csv("a,b\n"), ParseError);
}

TEST(Portfolio, HoldCurrentWeightsIsPriceReturn) {
  PortfolioEnvConfig cfg;
  cfg.panel = two_asset_panel({100, 110, 120}, {50, 45, 60});
  auto s = portfolio_reset(cfg);
  const auto first = portfolio_step(cfg, s, WeightVector{{0.0, 0.5, 0.5}});
  // Weights drift with prices; re-targeting the drifted mix trades nothing.
  const double va = first.state.holdings[0] * 110.0;
  const double vb = first.state.holdings[1] * 45.0;
  const double v = first.state.cash + va + vb;
  const auto second = portfolio_step(cfg, first.state, WeightVector{{first.state.cash / v, va / v, vb / v}});
  EXPECT_NEAR(second.record.cost, 0.0, 1e-9);
  const double want = (first.state.holdings[0] * 120.0 + first.state.holdings[1] * 60.0 + first.state.cash) / v - 1.0;
  EXPECT_NEAR(second.reward, want, 1e-12);
}

TEST(Portfolio, AllCashFlat) {
  PortfolioEnvConfig cfg;
  cfg.panel = two_asset_panel({10, 10}, {20, 20});
  const auto r = portfolio_step(cfg, portfolio_reset(cfg), WeightVector::all_cash(2));
  EXPECT_EQ(r.reward, 0.0);
  EXPECT_EQ(r.record.cost, 0.0);
}

TEST(Portfolio, HalfBookMoveCostsTen) {
  PortfolioEnvConfig cfg;
  cfg.panel = two_asset_panel({100, 100, 100}, {100, 100, 100});
  cfg.fee_rate = 0.0;
  const auto all_a = portfolio_step(cfg, portfolio_reset(cfg), WeightVector{{0.0, 1.0, 0.0}});
  PortfolioEnvConfig fee = cfg;
  fee.fee_rate = 1e-4;
  const auto moved = portfolio_step(fee, all_a.state, WeightVector{{0.0, 0.5, 0.5}});
  EXPECT_NEAR(moved.record.cost, 10.0, 1e-9);
  EXPECT_NEAR(moved.record.post_cost_value, 99990.0, 1e-9);
}

TEST(Portfolio, SingleAssetMatchesTradingBuy) {
  const auto s = prices({100, 104});
  PortfolioEnvConfig pc;
  pc.panel = Panel({"TST"}, s.timestamps());
  pc.panel.set_bar(0, 0, s[0]);
  pc.panel.set_bar(0, 1, s[1]);
  const auto p = portfolio_step(pc, portfolio_reset(pc), WeightVector{{0.0, 1.0}});
  const auto cfg = config_for(s);
  const auto t = trading_step(cfg, trading_reset(cfg), Action::kBuy);
  EXPECT_NEAR(p.record.post_cost_value, t.state.position * 100.0, 1e-9);
  EXPECT_NEAR(p.record.post_value, t.record.post_value, 1e-9);
}

TEST(Portfolio, RejectsBadWeightsAndMissingPrices) {
  PortfolioEnvConfig cfg;
  cfg.panel = two_asset_panel({10, 10}, {20, 20});
  const auto s = portfolio_reset(cfg);
  EXPECT_THROW(portfolio_step(cfg, s, WeightVector{{0.5, 0.6, 0.0}}), DataError);
  EXPECT_THROW(portfolio_step(cfg, s, WeightVector{{1.2, -0.2, 0.0}}), DataError);
  EXPECT_THROW(portfolio_step(cfg, s, WeightVector{{1.0, 0.0}}), DataError);
  Panel gap({"A", "B"}, cfg.panel.calendar());
  gap.set_bar(0, 0, *cfg.panel.bar(0, 0));
  gap.set_bar(0, 1, *cfg.panel.bar(0, 1));
  gap.set_bar(1, 0, *cfg.panel.bar(1, 0));
  PortfolioEnvConfig g;
  g.panel = gap;
  EXPECT_THROW(portfolio_step(g, portfolio_reset(g), WeightVector{{0.0, 0.5, 0.5}}), DataError);
  EXPECT_NO_THROW(portfolio_step(g, portfolio_reset(g), WeightVector{{0.0, 1.0, 0.0}}));
}

TEST(Portfolio, RandomRebalancesConserveValue) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  oracle::SyntheticPathSpec sa, sb;
  sa.seed = 1;
  sb.seed = 2;
  const auto a = oracle::make_path(sa);
  const auto b = oracle::make_path(sb);
  PortfolioEnvConfig cfg;
  cfg.panel = Panel({"A", "B"}, a.timestamps());
  for (std::size_t t = 0; t < a.size(); ++t) {
    cfg.panel.set_bar(0, t, a[t]);
    cfg.panel.set_bar(1, t, b[t]);
  }
  auto s = portfolio_reset(cfg);
  double prod = 1.0;
  while (s.t + 1 < cfg.panel.num_times()) {
    const double x = u(rng), y = u(rng), z = u(rng);
    const double sum = x + y + z;
    const auto r = portfolio_step(cfg, s, WeightVector{{x / sum, y / sum, 1.0 - x / sum - y / sum}});
    ASSERT_NEAR(r.record.pre_value - r.record.cost, r.record.post_cost_value, 1e-8);
    ASSERT_GE(r.record.cost, 0.0);
    prod *= r.record.post_value / r.record.pre_value;
    s = r.state;
  }
  EXPECT_NEAR(portfolio_value(cfg, s) / cfg.initial_cash, prod, 1e-9);
}

TEST(Prompt, RendersSectionsDeterministically) {
  TradingEnvConfig cfg = config_for(prices({100, 101, 102, 103, 104, 105, 106, 107, 108, 109}));
  cfg.display_name = "Test Corp";
  TradingEnv env(cfg);
  for (int i = 0; i < 8; ++i) env.step(i == 2 ? Action::kBuy : (i == 6 ? Action::kSell : Action::kHold));
  const std::string p = render_env_prompt(env);
  EXPECT_EQ(p, render_env_prompt(env));
  EXPECT_NE(p.find("# Name: Test Corp, Symbol: (TST)"), std::string::npos);
  EXPECT_NE(p.find("## News (3-5 news articles)\n**Timestamp | Title | Content**\n"), std::string::npos);
  EXPECT_NE(p.find("## Record\n| timestamp | open | high | low | close | volume | price | cash | position | pre_value | "
                   "action | post_value | ret |"),
            std::string::npos);
  EXPECT_NE(p.find("\\boxed{BUY}"), std::string::npos);
  EXPECT_EQ(p.find("{{"), std::string::npos);

  const auto valid = p.substr(p.find("## History Valid Action"), p.find("## Note") - p.find("## History Valid Action"));
  EXPECT_NE(valid.find("| BUY |"), std::string::npos);
  EXPECT_NE(valid.find("| SELL |"), std::string::npos);
  EXPECT_EQ(valid.find("| HOLD |"), std::string::npos);

  const auto price = p.substr(p.find("## Price"), p.find("## News") - p.find("## Price"));
  std::size_t rows = 0;
  for (char c : price) rows += c == '\n';
  EXPECT_EQ(rows, 1u + 2u + 7u + 1u);  // title, header + rule, 7 rows, blank
}

TEST(Prompt, CashAndPositionTwoDecimals) {
  PromptContext ctx;
  ctx.name = "X";
  ctx.symbol = "X";
  ctx.cash = 98359.28;
  ctx.position = 0.0;
  ctx.price = 10.0;
  ctx.now = make_date(2023, 5, 1);
  const std::string p = render_prompt(ctx);
  EXPECT_NE(p.find("are 10.00, 98359.28, and 0.00."), std::string::npos);
}

TEST(Prompt, NewsLines) {
  const std::vector<NewsItem> news = {{parse_timestamp("2023-05-01T08:00:00Z"), "X", "Head|line", "Body\nmore"}};
  PromptContext ctx;
  ctx.news = news;
  const std::string p = render_prompt(ctx);
  EXPECT_NE(p.find("**Timestamp | Title | Content**\n2023-05-01"), std::string::npos);
  EXPECT_EQ(p.find("Body\nmore"), std::string::npos);
}
