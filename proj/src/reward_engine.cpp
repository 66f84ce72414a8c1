#include "interleave/reward_engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "interleave/errors.hpp"
#include "interleave/qp_shaping.hpp"

namespace interleave {
namespace {

constexpr std::string_view kBoxed = "\\boxed{";

std::string_view boxed_payload(std::string_view s) {
  const auto at = s.rfind(kBoxed);
  if (at == std::string_view::npos) return s;
  const auto start = at + kBoxed.size();
  int depth = 1;
  for (std::size_t i = start; i < s.size(); ++i) {
    if (s[i] == '{') ++depth;
    else if (s[i] == '}' && --depth == 0) return s.substr(start, i - start);
  }
  return s;  // unbalanced: compare the raw text
}

double population_variance(std::span<const double> v, double mean) {
  double acc = 0;
  for (double x : v) acc += (x - mean) * (x - mean);
  return acc / static_cast<double>(v.size());
}

}  // namespace

std::string normalize_answer(std::string_view answer) {
  const auto payload = boxed_payload(answer);
  std::string out;
  for (const auto& tok : tokenize(payload, TokenizerId::kWhitespace)) {
    if (!out.empty()) out += ' ';
    out += tok;
  }
  return out;
}

int outcome_reward(std::string_view answer, std::string_view gold) {
  return normalize_answer(answer) == normalize_answer(gold) ? 1 : 0;
}

GroupStats group_stats(std::span<const double> rewards, double eps_num) {
  if (rewards.size() < 2) throw GroupTooSmall("group statistics need at least two rewards");
  GroupStats s;
  s.mean = std::accumulate(rewards.begin(), rewards.end(), 0.0) / static_cast<double>(rewards.size());
  s.stddev = std::sqrt(population_variance(rewards, s.mean) + eps_num);
  return s;
}

std::vector<double> advantages(std::span<const double> rewards, double eps_num, double degenerate_spread) {
  const auto stats = group_stats(rewards, eps_num);
  if (std::sqrt(population_variance(rewards, stats.mean)) < degenerate_spread || !(stats.stddev > 0)) {
    throw DegenerateGroup("rewards have (near) zero spread");
  }
  std::vector<double> out;
  out.reserve(rewards.size());
  for (double r : rewards) out.push_back((r - stats.mean) / stats.stddev);
  return out;
}

GroupDecision filter_group(std::span<const int> labels) {
  if (labels.size() < 2) throw GroupTooSmall("group filter needs at least two labels");
  const bool homogeneous = std::all_of(labels.begin(), labels.end(),
                                       [&](int g) { return (g != 0) == (labels.front() != 0); });
  return homogeneous ? GroupDecision::kDrop : GroupDecision::kKeep;
}

std::size_t max_block_length(const TokenStream& stream) {
  std::size_t best = 0;
  std::size_t run = 0;
  for (auto c : stream.channels) {
    run = c == Channel::kThink ? run + 1 : 0;
    best = std::max(best, run);
  }
  return best;
}

std::size_t max_block_length(const Trajectory& traj) {
  return max_block_length(TokenStream::from_trajectory(traj));
}

std::string_view to_string(PenaltyMode m) noexcept {
  return m == PenaltyMode::kConstantSMin ? "constant_smin" : "batch_max_length";
}

PenaltyMode penalty_mode_from_string(std::string_view s) {
  if (s == "constant_smin") return PenaltyMode::kConstantSMin;
  if (s == "batch_max_length") return PenaltyMode::kBatchMaxLength;
  throw ConfigError("unknown penalty mode '" + std::string(s) + "'");
}

void ShapingConfig::validate() const {
  if (!(margin > 0)) throw ConfigError("shaping margin must be > 0");
  if (!(s_min > 0)) throw ConfigError("s_min must be > 0");
  if (!(sigma_fallback > 0)) throw ConfigError("sigma_fallback must be > 0");
}

std::vector<double> structure_scores(std::span<const std::size_t> lengths, std::span<const int> labels,
                                     const ShapingConfig& cfg) {
  cfg.validate();
  if (lengths.size() != labels.size()) throw InvariantViolation("lengths and labels must have equal length");

  std::vector<double> good;
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    if (labels[i]) good.push_back(static_cast<double>(lengths[i]));
  }
  if (good.empty()) throw NoCorrectSamples("structure scores need at least one correct sample");
  const double mu = std::accumulate(good.begin(), good.end(), 0.0) / static_cast<double>(good.size());
  double sigma = std::sqrt(population_variance(good, mu));
  if (sigma <= 0) sigma = cfg.sigma_fallback;

  const double worst = static_cast<double>(*std::max_element(lengths.begin(), lengths.end()));
  std::vector<double> out(lengths.size());
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    if (labels[i]) {
      out[i] = -(static_cast<double>(lengths[i]) - mu) / sigma;
    } else if (cfg.penalty_mode == PenaltyMode::kConstantSMin) {
      out[i] = -cfg.s_min;
    } else {
      out[i] = -(worst - mu) / sigma;
    }
  }
  return out;
}

GroupResult evaluate_group(std::string group_id, std::string_view gold,
                           std::span<const std::string> tagged_rollouts, const RewardOptions& opts) {
  GroupResult out;
  out.group_id = std::move(group_id);

  std::size_t malformed = 0;
  for (const auto& text : tagged_rollouts) {
    try {
      const auto traj = parse_tagged_text(text, opts.tags, opts.tokenizer);
      out.labels.push_back(opts.checker(project_channel(traj, Channel::kSpeak, opts.delimiter), gold));
      out.max_block_lengths.push_back(max_block_length(traj));
    } catch (const MalformedTags&) {
      ++malformed;
      out.labels.push_back(0);
      out.max_block_lengths.push_back(0);
    }
  }
  out.rewards.assign(out.labels.begin(), out.labels.end());
  if (malformed > 0) out.note = std::to_string(malformed) + " rollout(s) with malformed tags";

  auto drop = [&](std::string why) {
    out.kept = false;
    out.advantages.clear();
    out.note = out.note.empty() ? std::move(why) : out.note + "; " + why;
    return out;
  };

  try {
    if (filter_group(out.labels) == GroupDecision::kDrop) return drop("homogeneous labels");
    if (opts.shape) {
      const auto scores = structure_scores(out.max_block_lengths, out.labels, opts.shaping);
      out.rewards = shape_rewards_qp(scores, out.labels, opts.shaping.margin, opts.shaping.kkt_tol);
      out.shaped = true;
    }
    out.advantages = advantages(out.rewards, opts.eps_num, opts.degenerate_spread);
    out.kept = true;
  } catch (const Infeasible& e) {
    return drop(e.what());
  } catch (const GroupTooSmall& e) {
    return drop(e.what());
  } catch (const DegenerateGroup& e) {
    return drop(e.what());
  } catch (const NumericalFailure& e) {
    return drop(e.what());
  }
  return out;
}

}  // namespace interleave
