#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace interleave {

/// Bumped whenever the rendered prompt changes; part of every replay key so
/// stale recordings miss instead of replaying answers to a different prompt.
inline constexpr std::string_view kDeciderTemplateVersion = "coverage-decider/1";

/// Inputs of one prefix-entailment check: how many of the remaining answer
/// blocks are established by the processed thoughts plus the current one.
struct DeciderState {
  std::string problem;
  std::string processed_thoughts;
  std::string covered_responses;
  std::string current_thought;
  std::vector<std::string> remaining_blocks;
};

std::string render_decider_prompt(const DeciderState& state);

/// Extracts `num_blocks` from a bare or ```-fenced JSON object and clamps it
/// into [0, remaining]. Throws Unparseable when no such object exists.
std::size_t parse_decider_response(std::string_view body, std::size_t remaining);

/// Stable content hash of a query, used as the replay-cache key.
std::string replay_key(const DeciderState& state);

}  // namespace interleave
