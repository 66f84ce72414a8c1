#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "interleave/pacing_metrics.hpp"
#include "interleave/tagged_stream.hpp"

namespace interleave {

/// Trim, collapse inner whitespace, and keep only the \boxed{...} payload
/// (last occurrence, braces balanced) when there is one.
std::string normalize_answer(std::string_view answer);

/// 1 iff the normalized answer equals the normalized gold.
int outcome_reward(std::string_view answer, std::string_view gold);

struct GroupStats {
  double mean = 0;
  double stddev = 0;  // sqrt(population variance + eps_num)
};

inline constexpr double kDefaultEpsNum = 1e-8;
inline constexpr double kDegenerateSpread = 1e-6;

/// Throws GroupTooSmall below two rewards.
GroupStats group_stats(std::span<const double> rewards, double eps_num = kDefaultEpsNum);

/// (R_i - mean) / stddev. Throws DegenerateGroup when the raw spread of the
/// rewards (population std without eps_num) is below `degenerate_spread`.
std::vector<double> advantages(std::span<const double> rewards, double eps_num = kDefaultEpsNum,
                               double degenerate_spread = kDegenerateSpread);

enum class GroupDecision { kKeep, kDrop };

/// Drops groups where every label agrees. Throws GroupTooSmall below two.
GroupDecision filter_group(std::span<const int> labels);

/// Longest contiguous run of think tokens; 0 without think tokens.
std::size_t max_block_length(const TokenStream& stream);
std::size_t max_block_length(const Trajectory& traj);

enum class PenaltyMode {
  kConstantSMin,    // incorrect samples score -s_min
  kBatchMaxLength,  // incorrect samples are scored as if at the group's max length
};

std::string_view to_string(PenaltyMode m) noexcept;
PenaltyMode penalty_mode_from_string(std::string_view s);

struct ShapingConfig {
  double margin = 0.5;
  double s_min = 3.0;
  PenaltyMode penalty_mode = PenaltyMode::kBatchMaxLength;
  double sigma_fallback = 1.0;
  double kkt_tol = 1e-6;

  void validate() const;
};

/// Standardized, sign-flipped max-block lengths, with mean and std taken
/// over correct samples only (std falls back to sigma_fallback at zero).
/// Throws NoCorrectSamples.
std::vector<double> structure_scores(std::span<const std::size_t> lengths, std::span<const int> labels,
                                     const ShapingConfig& cfg = {});

struct RewardOptions {
  bool shape = false;
  ShapingConfig shaping;
  double eps_num = kDefaultEpsNum;
  double degenerate_spread = kDegenerateSpread;
  TagConfig tags;
  TokenizerId tokenizer = TokenizerId::kWhitespace;
  std::string delimiter = "\n\n";
  AnswerChecker checker = outcome_reward;
};

struct GroupResult {
  std::string group_id;
  bool kept = false;
  std::vector<int> labels;
  std::vector<double> rewards;
  bool shaped = false;
  std::vector<double> advantages;
  std::vector<std::size_t> max_block_lengths;
  /// Why the group was dropped or which rollouts failed to parse; empty
  /// when there is nothing to say.
  std::string note;
};

/// Labels each tagged rollout against gold, filters degenerate groups,
/// optionally shapes rewards, and standardizes them into advantages.
/// A rollout whose tags do not parse is labelled incorrect.
GroupResult evaluate_group(std::string group_id, std::string_view gold,
                           std::span<const std::string> tagged_rollouts, const RewardOptions& opts = {});

}  // namespace interleave
