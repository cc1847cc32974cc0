#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace tradekit::rl {

/// 1 when the text is one <think>...</think> block followed by one \boxed{...}
/// with only whitespace around them, else 0.
int format_reward_reasoning(std::string_view text);

/// format_reward_reasoning plus boxed content exactly BUY, HOLD or SELL.
int format_reward_action(std::string_view text);

enum class Extraction { kFound, kAbsent, kUnbalanced };

struct BoxedAnswer {
  Extraction status = Extraction::kAbsent;
  std::string value;  // meaningful only when found

  bool found() const noexcept { return status == Extraction::kFound; }
};

/// Contents of the first \boxed{...}, matched with brace counting.
BoxedAnswer extract_boxed_answer(std::string_view text);

enum class AnswerType { kChoice, kMultiChoice, kNumeric, kText };

std::string_view to_string(AnswerType t);
std::optional<AnswerType> parse_answer_type(std::string_view s);

/// Parses a numeric answer, ignoring spaces, '$' and thousands commas. A
/// trailing '%' sets `percent`.
struct NumericAnswer {
  double value = 0.0;
  bool percent = false;
};
std::optional<NumericAnswer> parse_numeric_answer(std::string_view s);

inline constexpr double kNumericRelTol = 1e-4;

/// 1 when `extracted` matches `gold` under the rules of `type`:
///   choice        one letter, case-insensitive
///   multi_choice  same set of letters, any order or separators
///   numeric       relative tolerance 1e-4; a percent value may match either
///                 as written or divided by 100
///   text          trimmed, whitespace-collapsed, ASCII case-folded equality
/// Never throws. When a numeric side does not parse, `note` (if given)
/// receives the reason.
int accuracy_reward(std::string_view extracted, std::string_view gold, AnswerType type, std::string* note = nullptr);

struct RewardWeights {
  double alpha = 0.1;     // format weight, reasoning stage
  double beta_acc = 0.9;  // accuracy weight
  double gamma = 0.1;     // format weight, trading stage

  void validate() const;
};

double composite_reasoning_reward(int format, int accuracy, const RewardWeights& w = {});
double composite_trading_reward(int format, double trading, const RewardWeights& w = {});

}  // namespace tradekit::rl
