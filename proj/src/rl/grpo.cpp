#include "tradekit/rl/grpo.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tradekit/core/errors.hpp"

namespace tradekit::rl {

std::vector<double> group_advantages(std::span<const double> rewards, double std_floor) {
  if (rewards.empty()) throw ValidationError("group_advantages: empty group");
  for (std::size_t i = 0; i < rewards.size(); ++i) {
    if (!std::isfinite(rewards[i])) throw ValidationError("group_advantages: reward " + std::to_string(i) + " is not finite");
  }
  const double g = static_cast<double>(rewards.size());
  double mean = 0.0;
  for (double r : rewards) mean += r;
  mean /= g;
  double ss = 0.0;
  for (double r : rewards) ss += (r - mean) * (r - mean);
  const double sd = std::sqrt(ss / g);

  std::vector<double> adv(rewards.size(), 0.0);
  if (sd < std_floor) return adv;
  for (std::size_t i = 0; i < rewards.size(); ++i) adv[i] = (rewards[i] - mean) / sd;
  return adv;
}

void ClipConfig::validate() const {
  if (!(epsilon > 0.0)) throw ValidationError("grpo: epsilon must be > 0");
  if (!(beta_kl >= 0.0) || !std::isfinite(beta_kl)) throw ValidationError("grpo: beta_kl must be >= 0");
}

double grpo_objective(const TokenMatrix& ratios, std::span<const double> advantages, const ClipConfig& cfg,
                      const TokenMatrix& kl) {
  cfg.validate();
  if (ratios.empty()) throw ValidationError("grpo: empty group");
  if (advantages.size() != ratios.size()) throw ValidationError("grpo: one advantage per outcome required");
  if (!kl.empty() && kl.size() != ratios.size()) throw ValidationError("grpo: kl rows do not match outcomes");
  if (kl.empty() && cfg.beta_kl != 0.0) throw ValidationError("grpo: beta_kl > 0 needs kl values");

  double total = 0.0;
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    const auto& row = ratios[i];
    if (row.empty()) throw ValidationError("grpo: outcome " + std::to_string(i) + " has no tokens");
    if (!kl.empty() && kl[i].size() != row.size()) {
      throw ValidationError("grpo: kl row " + std::to_string(i) + " length differs from ratios");
    }
    const double a = advantages[i];
    double sum = 0.0;
    for (std::size_t t = 0; t < row.size(); ++t) {
      const double r = row[t];
      if (!(r > 0.0) || !std::isfinite(r)) throw ValidationError("grpo: ratios must be finite and > 0");
      const double clipped = std::clamp(r, 1.0 - cfg.epsilon, 1.0 + cfg.epsilon);
      double term = std::min(r * a, clipped * a);
      if (!kl.empty()) term -= cfg.beta_kl * kl[i][t];
      sum += term;
    }
    total += sum / static_cast<double>(row.size());
  }
  return total / static_cast<double>(ratios.size());
}

}  // namespace tradekit::rl
