#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "tradekit/core/errors.hpp"
#include "tradekit/rl/dataset.hpp"
#include "tradekit/rl/grpo.hpp"
#include "tradekit/rl/rewards.hpp"

using namespace tradekit;
using namespace tradekit::rl;

TEST(Advantages, Examples) {
  EXPECT_EQ(group_advantages(std::vector<double>{1, 1, 1}), (std::vector<double>{0, 0, 0}));
  EXPECT_EQ(group_advantages(std::vector<double>{0, 2}), (std::vector<double>{-1, 1}));
  EXPECT_EQ(group_advantages(std::vector<double>{5}), (std::vector<double>{0}));
  EXPECT_THROW(group_advantages(std::vector<double>{}), ValidationError);
  EXPECT_THROW(group_advantages(std::vector<double>{1, NAN}), ValidationError);
}

TEST(Advantages, NormalizedAndInvariant) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> z;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> r(2 + trial % 14);
    for (auto& x : r) x = z(rng);
    const auto a = group_advantages(r);
    EXPECT_LT(std::abs(oracle::naive_mean(a)), 1e-12);
    EXPECT_NEAR(oracle::naive_pop_std(a), 1.0, 1e-9);
    std::vector<double> shifted, scaled;
    for (double x : r) {
      shifted.push_back(x + 3.25);
      scaled.push_back(x * 7.5);
    }
    const auto b = group_advantages(shifted);
    const auto c = group_advantages(scaled);
    for (std::size_t i = 0; i < r.size(); ++i) {
      EXPECT_NEAR(a[i], b[i], 1e-12);
      EXPECT_NEAR(a[i], c[i], 1e-12);
    }
  }
}

TEST(Objective, ClipCases) {
  EXPECT_EQ(grpo_objective({{2.0}}, std::vector<double>{1.0}), 1.2);
  EXPECT_EQ(grpo_objective({{2.0}}, std::vector<double>{-1.0}), -2.0);
  // ratio 1 everywhere: the double average of the advantages
  EXPECT_DOUBLE_EQ(grpo_objective({{1, 1, 1}, {1}}, std::vector<double>{0.5, -1.5}), -0.5);
}

TEST(Objective, LargeEpsilonIsUnclipped) {
  const TokenMatrix r = {{0.5, 1.7, 2.2}, {0.9, 1.1}};
  const std::vector<double> adv = {0.8, -0.4};
  const double want = ((0.5 + 1.7 + 2.2) / 3 * 0.8 + (0.9 + 1.1) / 2 * -0.4) / 2;
  EXPECT_NEAR(grpo_objective(r, adv, ClipConfig{1e9, 0.0}), want, 1e-9);
}

TEST(Objective, TighterClipNeverHelpsPositiveAdvantages) {
  const TokenMatrix r = {{1.5, 0.9}, {1.3}};
  const std::vector<double> adv = {1.0, 0.5};
  double prev = grpo_objective(r, adv, ClipConfig{0.6, 0.0});
  for (double eps : {0.4, 0.3, 0.2, 0.1, 0.05}) {
    const double now = grpo_objective(r, adv, ClipConfig{eps, 0.0});
    EXPECT_LE(now, prev);
    prev = now;
  }
}

TEST(Objective, KlTermAndErrors) {
  EXPECT_DOUBLE_EQ(grpo_objective({{1.0, 1.0}}, std::vector<double>{1.0}, ClipConfig{0.2, 0.5}, {{0.2, 0.4}}),
                   1.0 - 0.5 * 0.3);
  EXPECT_THROW(grpo_objective({{1.0}}, std::vector<double>{1.0}, ClipConfig{0.2, 0.5}), ValidationError);
  EXPECT_THROW(grpo_objective({{0.0}}, std::vector<double>{1.0}), ValidationError);
  EXPECT_THROW(grpo_objective({{1.0}}, std::vector<double>{1.0, 2.0}), ValidationError);
  EXPECT_THROW(grpo_objective(TokenMatrix{std::vector<double>{}}, std::vector<double>{1.0}), ValidationError);
}

TEST(FormatReward, Reasoning) {
  EXPECT_EQ(format_reward_reasoning("<think>x</think>\\boxed{BUY}"), 1);
  EXPECT_EQ(format_reward_reasoning("  <think>a\nb</think>\n\\boxed{42}\n"), 1);
  EXPECT_EQ(format_reward_reasoning("\\boxed{BUY}"), 0);
  EXPECT_EQ(format_reward_reasoning("<think>a</think>extra\\boxed{B}"), 0);
  EXPECT_EQ(format_reward_reasoning("<think>a</think>\\boxed{B} trailing"), 0);
  EXPECT_EQ(format_reward_reasoning("<think><think>a</think></think>\\boxed{B}"), 0);
  EXPECT_EQ(format_reward_reasoning("<think>a</think>\\boxed{B}\\boxed{C}"), 0);
  EXPECT_EQ(format_reward_reasoning("<think>a</think>\\boxed{B"), 0);
}

TEST(FormatReward, Action) {
  EXPECT_EQ(format_reward_action("<think>x</think>\\boxed{BUY}"), 1);
  EXPECT_EQ(format_reward_action("<think>x</think>\\boxed{SELL}"), 1);
  EXPECT_EQ(format_reward_action("<think>x</think>\\boxed{buy}"), 0);
  EXPECT_EQ(format_reward_action("<think>x</think>\\boxed{BUY 10}"), 0);
}

TEST(FormatReward, TotalOnArbitraryBytes) {
  std::mt19937_64 rng(6);
  const std::string alphabet = "<>/{}\\thinkboxed BUY\n";
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  for (int i = 0; i < 2000; ++i) {
    std::string s;
    for (int k = 0; k < 30; ++k) s += alphabet[pick(rng)];
    const int a = format_reward_reasoning(s);
    const int b = format_reward_action(s);
    EXPECT_TRUE(a == 0 || a == 1);
    EXPECT_TRUE(b == 0 || b == 1);
    EXPECT_NO_THROW(extract_boxed_answer(s));
  }
}

TEST(Extract, Examples) {
  EXPECT_EQ(extract_boxed_answer("\\boxed{42}").value, "42");
  EXPECT_EQ(extract_boxed_answer("\\boxed{{a}}").value, "{a}");
  EXPECT_EQ(extract_boxed_answer("no box").status, Extraction::kAbsent);
  EXPECT_EQ(extract_boxed_answer("\\boxed{").status, Extraction::kUnbalanced);
  const auto empty = extract_boxed_answer("\\boxed{}");
  EXPECT_TRUE(empty.found());
  EXPECT_EQ(empty.value, "");
}

TEST(Accuracy, Examples) {
  EXPECT_EQ(accuracy_reward("b", "B", AnswerType::kChoice), 1);
  EXPECT_EQ(accuracy_reward("(C).", "C", AnswerType::kChoice), 1);
  EXPECT_EQ(accuracy_reward("AB", "A", AnswerType::kChoice), 0);
  EXPECT_EQ(accuracy_reward("A,C", "C, A", AnswerType::kMultiChoice), 1);
  EXPECT_EQ(accuracy_reward("A,C,C", "CA", AnswerType::kMultiChoice), 1);
  EXPECT_EQ(accuracy_reward("A,B", "A", AnswerType::kMultiChoice), 0);
  EXPECT_EQ(accuracy_reward("12.5%", "0.125", AnswerType::kNumeric), 1);
  EXPECT_EQ(accuracy_reward("$1,234.5", "1234.5", AnswerType::kNumeric), 1);
  EXPECT_EQ(accuracy_reward("100.005", "100", AnswerType::kNumeric), 1);
  EXPECT_EQ(accuracy_reward("100.02", "100", AnswerType::kNumeric), 0);
  std::string note;
  EXPECT_EQ(accuracy_reward("about ten", "10", AnswerType::kNumeric, &note), 0);
  EXPECT_FALSE(note.empty());
  EXPECT_EQ(accuracy_reward("  Net   Income ", "net income", AnswerType::kText), 1);
}

TEST(Composite, Weights) {
  EXPECT_DOUBLE_EQ(composite_reasoning_reward(1, 1), 1.0);
  EXPECT_EQ(composite_reasoning_reward(1, 0), 0.1);
  EXPECT_EQ(composite_reasoning_reward(0, 1), 0.9);
  EXPECT_EQ(composite_reasoning_reward(0, 0), 0.0);
  EXPECT_EQ(composite_trading_reward(1, 0.0), 0.1);
  EXPECT_DOUBLE_EQ(composite_trading_reward(0, 0.05), 0.045);
  RewardWeights w;
  w.gamma = 0.0;
  EXPECT_EQ(composite_trading_reward(1, 0.037, w), 0.037);
  w.alpha = 1.5;
  EXPECT_THROW(w.validate(), ConfigError);
}

TEST(Dataset, ParseAndScore) {
  const std::string jsonl =
      R"({"id":"q1","question":"Pick one","answer":"B","answer_type":"choice"})" "\n"
      R"({"id":"q2","question":"增长率?","answer":"12.5%","answer_type":"numeric","language":"zh"})" "\n";
  const auto recs = parse_reasoning_jsonl(jsonl);
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_EQ(recs[1].language, Language::kChinese);
  EXPECT_NE(reasoning_prompt(recs[0]).find("Pick one"), std::string::npos);
  EXPECT_NE(reasoning_instruction(Language::kEnglish), reasoning_instruction(Language::kChinese));

  const std::vector<std::string> responses = {"<think>hmm</think>\\boxed{b}", "\\boxed{0.125}"};
  const auto sum = score_responses(recs, responses);
  EXPECT_EQ(sum.n_correct, 2u);
  EXPECT_DOUBLE_EQ(sum.score, 100.0);
  EXPECT_DOUBLE_EQ(sum.items[0].reward, 1.0);
  EXPECT_DOUBLE_EQ(sum.items[1].reward, 0.9);
  EXPECT_THROW(parse_reasoning_jsonl(R"({"question":"x","answer":"y","answer_type":"essay"})"), ParseError);
}
