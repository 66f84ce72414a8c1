#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "interleave/oracle.hpp"
#include "interleave/trajectory_builder.hpp"

namespace interleave {

/// Per-step coverage counts as reported by the decider.
/// Absolute: blocks of the full answer covered by R_{1:k}.
/// Incremental: blocks newly covered at step k, out of those still pending.
struct RawCounts {
  enum class Semantics { kAbsolute, kIncremental };

  std::vector<std::size_t> counts;
  Semantics semantics = Semantics::kAbsolute;
};

struct AlignmentResult {
  BoundaryVector boundaries;
  RawCounts raw;
  /// 1-based prefix index whose check reported full coverage first in index
  /// order; later checks were cancelled (parallel mode only).
  std::optional<std::size_t> cancelled_from;
  /// Prefix checks whose answer was replaced by full coverage.
  std::size_t cancelled_checks = 0;
};

/// Running max of absolute counts (each clamped to answer_count), with the
/// last boundary forced to answer_count.
BoundaryVector monotone_repair(const RawCounts& raw, std::size_t answer_count);

/// Asks `oracle`, re-asking up to `max_retries` times on unparseable output.
/// Returns nullopt when every answer was unparseable.
std::optional<std::size_t> ask_count(EntailmentOracle& oracle, const DeciderQuery& query,
                                     int max_retries);

/// One incremental check per reasoning step k < K_R against the blocks that
/// are still pending; the boundary advances by the returned count.
AlignmentResult align_sequential(const SegmentedPair& pair, std::string_view problem,
                                 EntailmentOracle& oracle, int max_retries = 3,
                                 std::string_view delimiter = kDefaultDelimiter);

/// Independent absolute checks for every prefix k < K_R on up to
/// cfg.concurrency threads, then monotone repair. With cancellation enabled,
/// a check reporting full coverage cancels every later one, which is then
/// taken as fully covered. The result depends only on the oracle's answers,
/// never on scheduling.
AlignmentResult align_parallel(const SegmentedPair& pair, std::string_view problem,
                               EntailmentOracle& oracle, const OracleConfig& cfg,
                               std::string_view delimiter = kDefaultDelimiter);

/// Query that align_parallel issues for prefix k (1-based). Exposed so tests
/// and recorders can build the same keys.
DeciderQuery absolute_query(const SegmentedPair& pair, std::string_view problem, std::size_t k,
                            std::string_view delimiter = kDefaultDelimiter);

}  // namespace interleave
