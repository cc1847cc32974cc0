#include "tradekit/rl/rewards.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

#include "tradekit/core/errors.hpp"
#include "tradekit/core/text.hpp"

namespace tradekit::rl {

namespace {

constexpr std::string_view kThinkOpen = "<think>";
constexpr std::string_view kThinkClose = "</think>";
constexpr std::string_view kBoxed = "\\boxed";

bool is_ws(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

std::size_t skip_ws(std::string_view s, std::size_t i) {
  while (i < s.size() && is_ws(s[i])) ++i;
  return i;
}

std::size_t count_of(std::string_view s, std::string_view needle) {
  std::size_t n = 0;
  for (auto pos = s.find(needle); pos != std::string_view::npos; pos = s.find(needle, pos + needle.size())) ++n;
  return n;
}

// Index of the '}' closing the brace group whose body starts at `begin`, or
// npos. A backslash escapes the following brace.
std::size_t match_brace(std::string_view s, std::size_t begin) {
  int depth = 1;
  for (std::size_t i = begin; i < s.size(); ++i) {
    const char c = s[i];
    if (c == '\\' && i + 1 < s.size() && (s[i + 1] == '{' || s[i + 1] == '}')) {
      ++i;
    } else if (c == '{') {
      ++depth;
    } else if (c == '}' && --depth == 0) {
      return i;
    }
  }
  return std::string_view::npos;
}

std::string normalize_text(std::string_view s) {
  std::string out;
  bool pending_space = false;
  for (char c : trim(s)) {
    if (is_ws(c)) {
      pending_space = true;
      continue;
    }
    if (pending_space && !out.empty()) out += ' ';
    pending_space = false;
    out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

std::optional<char> single_letter(std::string_view s) {
  s = trim(s);
  while (!s.empty() && s.back() == '.') s.remove_suffix(1);
  if (s.size() >= 2 && s.front() == '(' && s.back() == ')') s = trim(s.substr(1, s.size() - 2));
  while (!s.empty() && (s.back() == '.' || s.back() == ')')) s.remove_suffix(1);
  if (s.size() != 1 || !std::isalpha(static_cast<unsigned char>(s[0]))) return std::nullopt;
  return static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
}

std::optional<std::set<char>> letter_set(std::string_view raw) {
  std::string s(raw);
  for (std::string_view wide : {"\xEF\xBC\x8C", "\xE3\x80\x81"}) {  // full-width comma, ideographic comma
    for (auto pos = s.find(wide); pos != std::string::npos; pos = s.find(wide)) s.replace(pos, wide.size(), ",");
  }
  std::set<char> letters;
  for (char c : s) {
    if (std::isalpha(static_cast<unsigned char>(c))) {
      letters.insert(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    } else if (!(is_ws(c) || c == ',' || c == ';' || c == '/')) {
      return std::nullopt;
    }
  }
  if (letters.empty()) return std::nullopt;
  return letters;
}

bool rel_close(double a, double b) {
  if (a == b) return true;
  return std::abs(a - b) <= kNumericRelTol * std::max(std::abs(a), std::abs(b));
}

std::vector<double> readings(const NumericAnswer& n) {
  if (n.percent) return {n.value, n.value / 100.0};
  return {n.value};
}

}  // namespace

int format_reward_reasoning(std::string_view text) {
  if (count_of(text, kThinkOpen) != 1 || count_of(text, kThinkClose) != 1 || count_of(text, kBoxed) != 1) return 0;
  std::size_t i = skip_ws(text, 0);
  if (text.substr(i, kThinkOpen.size()) != kThinkOpen) return 0;
  const std::size_t close = text.find(kThinkClose, i + kThinkOpen.size());
  if (close == std::string_view::npos) return 0;
  i = skip_ws(text, close + kThinkClose.size());
  if (text.substr(i, kBoxed.size() + 1) != "\\boxed{") return 0;
  const std::size_t end = match_brace(text, i + kBoxed.size() + 1);
  if (end == std::string_view::npos) return 0;
  return skip_ws(text, end + 1) == text.size() ? 1 : 0;
}

int format_reward_action(std::string_view text) {
  if (format_reward_reasoning(text) == 0) return 0;
  const BoxedAnswer a = extract_boxed_answer(text);
  return a.found() && (a.value == "BUY" || a.value == "HOLD" || a.value == "SELL") ? 1 : 0;
}

BoxedAnswer extract_boxed_answer(std::string_view text) {
  const std::string_view open = "\\boxed{";
  const std::size_t pos = text.find(open);
  if (pos == std::string_view::npos) return {Extraction::kAbsent, {}};
  const std::size_t begin = pos + open.size();
  const std::size_t end = match_brace(text, begin);
  if (end == std::string_view::npos) return {Extraction::kUnbalanced, {}};
  return {Extraction::kFound, std::string(text.substr(begin, end - begin))};
}

std::string_view to_string(AnswerType t) {
  switch (t) {
    case AnswerType::kChoice: return "choice";
    case AnswerType::kMultiChoice: return "multi_choice";
    case AnswerType::kNumeric: return "numeric";
    case AnswerType::kText: return "text";
  }
  return "text";
}

std::optional<AnswerType> parse_answer_type(std::string_view s) {
  const std::string k = to_lower(trim(s));
  if (k == "choice") return AnswerType::kChoice;
  if (k == "multi_choice") return AnswerType::kMultiChoice;
  if (k == "numeric") return AnswerType::kNumeric;
  if (k == "text") return AnswerType::kText;
  return std::nullopt;
}

std::optional<NumericAnswer> parse_numeric_answer(std::string_view s) {
  std::string clean;
  for (char c : s) {
    if (is_ws(c) || c == '$' || c == ',') continue;
    clean += c;
  }
  NumericAnswer out;
  if (!clean.empty() && clean.back() == '%') {
    out.percent = true;
    clean.pop_back();
  }
  if (!clean.empty() && clean.front() == '+') clean.erase(0, 1);
  const auto v = parse_double(clean);
  if (!v || !std::isfinite(*v)) return std::nullopt;
  out.value = *v;
  return out;
}

int accuracy_reward(std::string_view extracted, std::string_view gold, AnswerType type, std::string* note) {
  switch (type) {
    case AnswerType::kChoice: {
      const auto a = single_letter(extracted);
      const auto b = single_letter(gold);
      return a && b && *a == *b ? 1 : 0;
    }
    case AnswerType::kMultiChoice: {
      const auto a = letter_set(extracted);
      const auto b = letter_set(gold);
      return a && b && *a == *b ? 1 : 0;
    }
    case AnswerType::kNumeric: {
      const auto a = parse_numeric_answer(extracted);
      const auto b = parse_numeric_answer(gold);
      if (!a || !b) {
        if (note) *note = !a ? "unparseable numeric answer: " + std::string(extracted)
                             : "unparseable numeric gold: " + std::string(gold);
        return 0;
      }
      for (double x : readings(*a)) {
        for (double y : readings(*b)) {
          if (rel_close(x, y)) return 1;
        }
      }
      return 0;
    }
    case AnswerType::kText:
      return normalize_text(extracted) == normalize_text(gold) ? 1 : 0;
  }
  return 0;
}

void RewardWeights::validate() const {
  for (double v : {alpha, beta_acc, gamma}) {
    if (!(v >= 0.0 && v <= 1.0)) throw ConfigError("reward weights must lie in [0, 1]");
  }
}

double composite_reasoning_reward(int format, int accuracy, const RewardWeights& w) {
  return w.alpha * format + w.beta_acc * accuracy;
}

double composite_trading_reward(int format, double trading, const RewardWeights& w) {
  return w.gamma * format + (1.0 - w.gamma) * trading;
}

}  // namespace tradekit::rl
