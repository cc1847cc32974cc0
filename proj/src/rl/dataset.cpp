#include "tradekit/rl/dataset.hpp"

#include <json.hpp>

#include "reasoning_templates.hpp"
#include "tradekit/core/errors.hpp"
#include "tradekit/core/text.hpp"
#include "tradekit/metrics/forecasting.hpp"

namespace tradekit::rl {

namespace {

std::string required_string(const nlohmann::json& obj, const char* key, std::size_t line) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) {
    throw ParseError("reasoning dataset line " + std::to_string(line) + ": missing string field '" + key + "'");
  }
  return it->get<std::string>();
}

}  // namespace

std::vector<ReasoningRecord> parse_reasoning_jsonl(std::string_view bytes) {
  std::vector<ReasoningRecord> out;
  const auto lines = split_lines(bytes);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    if (trim(lines[i]).empty()) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(lines[i]);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError("reasoning dataset line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!obj.is_object()) throw ParseError("reasoning dataset line " + std::to_string(line_no) + ": not an object");

    ReasoningRecord r;
    if (const auto it = obj.find("id"); it != obj.end()) r.id = it->is_string() ? it->get<std::string>() : it->dump();
    r.question = required_string(obj, "question", line_no);
    r.answer = required_string(obj, "answer", line_no);
    const auto type = parse_answer_type(required_string(obj, "answer_type", line_no));
    if (!type) throw ParseError("reasoning dataset line " + std::to_string(line_no) + ": unknown answer_type");
    r.answer_type = *type;
    const std::string lang = obj.contains("language") ? to_lower(required_string(obj, "language", line_no)) : "en";
    if (lang == "en") {
      r.language = Language::kEnglish;
    } else if (lang == "zh") {
      r.language = Language::kChinese;
    } else {
      throw ParseError("reasoning dataset line " + std::to_string(line_no) + ": language must be en or zh");
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::string_view reasoning_instruction(Language lang) {
  return lang == Language::kChinese ? detail::kReasoningZh : detail::kReasoningEn;
}

std::string reasoning_prompt(const ReasoningRecord& record) {
  std::string out(reasoning_instruction(record.language));
  out += "\n\n";
  out += record.question;
  return out;
}

ScoredResponse score_response(const ReasoningRecord& record, std::string_view response, const RewardWeights& weights) {
  ScoredResponse s;
  s.format = format_reward_reasoning(response);
  const BoxedAnswer boxed = extract_boxed_answer(response);
  s.accuracy = boxed.found() ? accuracy_reward(boxed.value, record.answer, record.answer_type) : 0;
  s.reward = composite_reasoning_reward(s.format, s.accuracy, weights);
  return s;
}

ScoreSummary score_responses(std::span<const ReasoningRecord> records, std::span<const std::string> responses,
                             const RewardWeights& weights) {
  if (records.size() != responses.size()) throw ValidationError("score_responses: records and responses differ in length");
  ScoreSummary out;
  for (std::size_t i = 0; i < records.size(); ++i) {
    out.items.push_back(score_response(records[i], responses[i], weights));
    out.n_correct += static_cast<std::size_t>(out.items.back().accuracy);
  }
  out.n_total = records.size();
  out.score = metrics::score(static_cast<long>(out.n_correct), static_cast<long>(out.n_total));
  return out;
}

}  // namespace tradekit::rl
