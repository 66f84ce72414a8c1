#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "interleave/tagged_stream.hpp"

namespace interleave {

inline constexpr std::string_view kDefaultDelimiter = "\n\n";

struct Triple {
  std::string id;
  std::string prompt;
  std::string reasoning;
  std::string answer;
};

/// Reasoning and answer after normalization and delimiter split. Both block
/// lists are non-empty and contain no empty blocks.
struct SegmentedPair {
  std::vector<std::string> reasoning;
  std::vector<std::string> answer;

  std::size_t reasoning_count() const noexcept { return reasoning.size(); }
  std::size_t answer_count() const noexcept { return answer.size(); }
};

/// Monotone map from reasoning prefix length k (1-based) to the number of
/// answer blocks it supports, with the last entry pinned to answer_count.
struct BoundaryVector {
  std::vector<std::size_t> boundaries;
  std::size_t answer_count = 0;

  /// Throws InvariantViolation unless non-empty, non-decreasing, bounded by
  /// answer_count and terminating at answer_count.
  void check() const;

  friend bool operator==(const BoundaryVector&, const BoundaryVector&) = default;
};

enum class OracleMode { kSequential, kParallel };

std::string_view to_string(OracleMode m) noexcept;
OracleMode oracle_mode_from_string(std::string_view s);

struct InterleavedSample {
  std::string id;
  std::vector<Segment> sequence;
  BoundaryVector boundaries;
  OracleMode oracle_mode = OracleMode::kSequential;
  std::optional<std::size_t> cancelled_from;
};

/// Collapses every whitespace run holding two or more newlines to exactly
/// "\n\n" and trims both ends. Single newlines and inner spaces survive.
std::string normalize_whitespace(std::string_view text);

/// Splits on `delimiter`, dropping empty pieces. Throws EmptyAfterSplit when
/// nothing is left.
std::vector<std::string> split_blocks(std::string_view text, std::string_view delimiter);

/// Normalizes and splits both reasoning and answer of a triple.
SegmentedPair segment(const Triple& triple, std::string_view delimiter = kDefaultDelimiter);

/// Joins blocks (prev, next] (1-based, i.e. answer[prev .. next-1]).
/// Throws RangeError unless prev < next <= answer.size().
std::string answer_increment(std::span<const std::string> answer, std::size_t prev,
                             std::size_t next, std::string_view delimiter = kDefaultDelimiter);

/// Emits reasoning blocks, merging consecutive ones while nothing new is
/// unlocked, and an answer increment every time the boundary grows. Once the
/// full answer is out, the remaining reasoning becomes one trailing block.
InterleavedSample build_interleaved(const SegmentedPair& pair, const BoundaryVector& boundaries,
                                    std::string id = {},
                                    std::string_view delimiter = kDefaultDelimiter);

InterleavedSample build_interleaved(const Triple& triple, const BoundaryVector& boundaries,
                                    std::string_view delimiter = kDefaultDelimiter);

}  // namespace interleave
