#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tradekit/rl/rewards.hpp"

namespace tradekit::rl {

enum class Language { kEnglish, kChinese };

struct ReasoningRecord {
  std::string id;
  std::string question;
  std::string answer;
  AnswerType answer_type = AnswerType::kText;
  Language language = Language::kEnglish;
};

/// JSONL with keys id (optional), question, answer, answer_type and
/// language ("en" / "zh"; default "en"). Throws ParseError naming the line.
std::vector<ReasoningRecord> parse_reasoning_jsonl(std::string_view bytes);

/// System instruction for the record's language.
std::string_view reasoning_instruction(Language lang);
/// Instruction followed by a blank line and the question.
std::string reasoning_prompt(const ReasoningRecord& record);

struct ScoredResponse {
  int format = 0;
  int accuracy = 0;
  double reward = 0.0;
};

ScoredResponse score_response(const ReasoningRecord& record, std::string_view response,
                              const RewardWeights& weights = {});

struct ScoreSummary {
  std::size_t n_correct = 0;
  std::size_t n_total = 0;
  double score = 0.0;  // percent
  std::vector<ScoredResponse> items;
};

/// Scores responses aligned with records. Throws ValidationError when the
/// lengths differ or there are no records.
ScoreSummary score_responses(std::span<const ReasoningRecord> records, std::span<const std::string> responses,
                             const RewardWeights& weights = {});

}  // namespace tradekit::rl
