#pragma once

#include <span>
#include <vector>

namespace tradekit::rl {

inline constexpr double kDefaultStdFloor = 1e-8;

/// (r_i - mean) / std with population std; all zeros when std < std_floor.
/// Throws ValidationError on an empty group or a non-finite reward.
std::vector<double> group_advantages(std::span<const double> rewards, double std_floor = kDefaultStdFloor);

struct ClipConfig {
  double epsilon = 0.2;
  double beta_kl = 0.0;  // KL coefficient; unrelated to the accuracy weight

  void validate() const;
};

/// Token-level ratios per outcome; the row length is |o_i|.
using TokenMatrix = std::vector<std::vector<double>>;

/// (1/G) sum_i (1/|o_i|) sum_t [min(r A, clip(r, 1-eps, 1+eps) A) - beta_kl * kl].
/// `advantages` holds one value per outcome (broadcast over tokens). `kl`
/// may be empty, which is only allowed when beta_kl == 0.
/// Throws ValidationError on shape mismatch, empty outcomes or ratios <= 0.
double grpo_objective(const TokenMatrix& ratios, std::span<const double> advantages, const ClipConfig& cfg = {},
                      const TokenMatrix& kl = {});

}  // namespace tradekit::rl
