#include "tradekit/envs/prompt.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <vector>

#include "tradekit/core/text.hpp"
#include "tradekit/ingest/news.hpp"
#include "trading_prompt_template.hpp"

namespace tradekit::envs {

namespace {

std::string fixed2(double v) { return format_fixed(v, 2); }

std::string general(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string one_line(std::string_view s) {
  std::string out(s);
  std::replace(out.begin(), out.end(), '\n', ' ');
  std::replace(out.begin(), out.end(), '\r', ' ');
  std::replace(out.begin(), out.end(), '|', '/');
  return out;
}

std::string table(const std::vector<std::string>& header, std::string_view align,
                  const std::vector<std::vector<std::string>>& rows) {
  std::string out = "|";
  for (const auto& h : header) out += " " + h + " |";
  out += "\n|";
  for (std::size_t i = 0; i < header.size(); ++i) out += align[i] == 'l' ? ":---|" : "---:|";
  for (const auto& row : rows) {
    out += "\n|";
    for (const auto& cell : row) out += " " + cell + " |";
  }
  return out;
}

template <class T>
std::span<const T> tail(std::span<const T> s, std::size_t n) {
  return s.size() > n ? s.subspan(s.size() - n) : s;
}

std::vector<std::string> record_row(const StepRecord& r) {
  return {format_timestamp(r.timestamp),
          fixed2(r.open),
          fixed2(r.high),
          fixed2(r.low),
          fixed2(r.close),
          general(r.volume),
          fixed2(r.price),
          fixed2(r.cash),
          fixed2(r.position),
          fixed2(r.pre_value),
          std::string(to_string(r.action)),
          fixed2(r.post_value),
          format_fixed(r.ret, 6)};
}

const std::vector<std::string> kRecordHeader{"timestamp", "open", "high", "low", "close", "volume", "price",
                                             "cash", "position", "pre_value", "action", "post_value", "ret"};
constexpr std::string_view kRecordAlign = "lrrrrrrrrrlrr";

// Single pass so substituted text is never rescanned for placeholders.
std::string substitute(std::string_view tmpl, const std::map<std::string, std::string, std::less<>>& values) {
  std::string out;
  std::size_t pos = 0;
  while (pos < tmpl.size()) {
    const std::size_t open = tmpl.find("{{", pos);
    if (open == std::string_view::npos) break;
    const std::size_t close = tmpl.find("}}", open + 2);
    if (close == std::string_view::npos) break;
    out.append(tmpl.substr(pos, open - pos));
    const auto it = values.find(tmpl.substr(open + 2, close - open - 2));
    if (it != values.end()) {
      out += it->second;
    } else {
      out.append(tmpl.substr(open, close + 2 - open));
    }
    pos = close + 2;
  }
  out.append(tmpl.substr(std::min(pos, tmpl.size())));
  return out;
}

}  // namespace

std::string_view default_trading_template() { return detail::kTradingPromptTemplate; }

std::string render_prompt(const PromptContext& ctx, std::string_view tmpl) {
  std::vector<std::vector<std::string>> price_rows;
  for (const Bar& b : tail(ctx.bars, kPromptHistoryRows)) {
    price_rows.push_back({fixed2(b.close), fixed2(b.high), fixed2(b.low), fixed2(b.open), general(b.volume)});
  }

  std::string news;
  for (const NewsItem& n : tail(ctx.news, kPromptNewsItems)) {
    if (!news.empty()) news += '\n';
    news += format_datetime(n.timestamp) + " | " + one_line(n.title) + " | " + one_line(n.content);
  }

  const auto recent = tail(ctx.records, kPromptHistoryRows);
  std::vector<std::vector<std::string>> history_rows;
  std::vector<std::vector<std::string>> record_rows;
  for (const StepRecord& r : recent) {
    history_rows.push_back({format_timestamp(r.timestamp), std::string(to_string(r.action)), fixed2(r.price),
                            general(r.volume)});
    record_rows.push_back(record_row(r));
  }

  std::vector<StepRecord> valid;
  for (const StepRecord& r : ctx.records) {
    if (r.action != Action::kHold) valid.push_back(r);
  }
  std::vector<std::vector<std::string>> valid_rows;
  for (const StepRecord& r : tail(std::span<const StepRecord>(valid), kPromptHistoryRows)) {
    valid_rows.push_back(record_row(r));
  }

  return substitute(tmpl, {
                               {"name", ctx.name},
                               {"symbol", ctx.symbol},
                               {"price_table", table({"close", "high", "low", "open", "volume"}, "rrrrr", price_rows)},
                               {"news", news},
                               {"history_table", table({"Timestamp", "Decision", "Price", "Volume"}, "rrrr", history_rows)},
                               {"record_table", table(kRecordHeader, kRecordAlign, record_rows)},
                               {"valid_action_table", table(kRecordHeader, kRecordAlign, valid_rows)},
                               {"now", format_timestamp(ctx.now)},
                               {"price", fixed2(ctx.price)},
                               {"cash", fixed2(ctx.cash)},
                               {"position", fixed2(ctx.position)},
                           });
}

std::string render_env_prompt(const TradingEnv& env, std::string_view tmpl) {
  const TradingEnvConfig& cfg = env.config();
  const TradingState& st = env.state();
  const auto bars = cfg.series.bars().first(st.t + 1);
  const Bar& bar = cfg.series[st.t];

  const auto news = ingest::news_window(cfg.news, cfg.series.symbol(), bar.timestamp, kPromptNewsItems);

  PromptContext ctx;
  ctx.name = cfg.display_name.empty() ? cfg.series.symbol() : cfg.display_name;
  ctx.symbol = cfg.series.symbol();
  ctx.bars = bars;
  ctx.records = env.records();
  ctx.news = news;
  ctx.now = bar.timestamp;
  ctx.price = bar.price();
  ctx.cash = st.cash;
  ctx.position = st.position;
  return render_prompt(ctx, tmpl);
}

}  // namespace tradekit::envs
