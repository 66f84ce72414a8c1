#include "interleave/trajectory_builder.hpp"

#include "interleave/errors.hpp"

namespace interleave {
namespace {

bool is_horizontal_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v'; }
bool is_ascii_space(char c) { return c == '\n' || is_horizontal_space(c); }

}  // namespace

std::string_view to_string(OracleMode m) noexcept {
  return m == OracleMode::kParallel ? "parallel" : "sequential";
}

OracleMode oracle_mode_from_string(std::string_view s) {
  if (s == "sequential") return OracleMode::kSequential;
  if (s == "parallel") return OracleMode::kParallel;
  throw ConfigError("unknown oracle mode '" + std::string(s) + "'");
}

void BoundaryVector::check() const {
  if (boundaries.empty()) throw InvariantViolation("boundary vector is empty");
  std::size_t prev = 0;
  for (std::size_t k = 0; k < boundaries.size(); ++k) {
    if (boundaries[k] < prev) {
      throw InvariantViolation("boundary " + std::to_string(k + 1) + " decreases");
    }
    if (boundaries[k] > answer_count) {
      throw InvariantViolation("boundary " + std::to_string(k + 1) + " exceeds answer count");
    }
    prev = boundaries[k];
  }
  if (boundaries.back() != answer_count) {
    throw InvariantViolation("last boundary must equal the answer block count");
  }
}

std::string normalize_whitespace(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (!is_ascii_space(text[i])) {
      out += text[i++];
      continue;
    }
    std::size_t j = i;
    std::size_t newlines = 0;
    while (j < text.size() && is_ascii_space(text[j])) {
      if (text[j] == '\n') ++newlines;
      ++j;
    }
    if (newlines >= 2) {
      out += "\n\n";
    } else {
      out.append(text.substr(i, j - i));
    }
    i = j;
  }
  const auto first = out.find_first_not_of(" \t\r\f\v\n");
  if (first == std::string::npos) return {};
  const auto last = out.find_last_not_of(" \t\r\f\v\n");
  return out.substr(first, last - first + 1);
}

std::vector<std::string> split_blocks(std::string_view text, std::string_view delimiter) {
  if (delimiter.empty()) throw ConfigError("block delimiter must be non-empty");
  std::vector<std::string> blocks;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto hit = text.find(delimiter, pos);
    const auto end = hit == std::string_view::npos ? text.size() : hit;
    if (end > pos) blocks.emplace_back(text.substr(pos, end - pos));
    if (hit == std::string_view::npos) break;
    pos = hit + delimiter.size();
  }
  if (blocks.empty()) throw EmptyAfterSplit("no blocks after splitting");
  return blocks;
}

SegmentedPair segment(const Triple& triple, std::string_view delimiter) {
  return {split_blocks(normalize_whitespace(triple.reasoning), delimiter),
          split_blocks(normalize_whitespace(triple.answer), delimiter)};
}

std::string answer_increment(std::span<const std::string> answer, std::size_t prev,
                             std::size_t next, std::string_view delimiter) {
  if (prev >= next || next > answer.size()) {
    throw RangeError("answer increment (" + std::to_string(prev) + ", " + std::to_string(next) +
                     "] out of range for " + std::to_string(answer.size()) + " blocks");
  }
  std::string out = answer[prev];
  for (std::size_t m = prev + 1; m < next; ++m) {
    out += delimiter;
    out += answer[m];
  }
  return out;
}

InterleavedSample build_interleaved(const SegmentedPair& pair, const BoundaryVector& boundaries,
                                    std::string id, std::string_view delimiter) {
  boundaries.check();
  const std::size_t kr = pair.reasoning_count();
  const std::size_t ka = pair.answer_count();
  if (boundaries.boundaries.size() != kr || boundaries.answer_count != ka) {
    throw InvariantViolation("boundary vector does not match the segmented pair");
  }

  InterleavedSample sample;
  sample.id = std::move(id);
  sample.boundaries = boundaries;
  auto& seq = sample.sequence;

  std::size_t prev = 0;
  bool open = true;
  for (std::size_t k = 0; k < kr; ++k) {
    const std::size_t bound = boundaries.boundaries[k];
    if (open) {
      seq.push_back({Channel::kThink, pair.reasoning[k]});
      open = false;
    } else {
      seq.back().text += delimiter;
      seq.back().text += pair.reasoning[k];
    }
    if (bound > prev) {
      seq.push_back({Channel::kSpeak, answer_increment(pair.answer, prev, bound, delimiter)});
      prev = bound;
      open = true;
    }
    if (bound == ka && k + 1 < kr) {
      std::string trail = pair.reasoning[k + 1];
      for (std::size_t j = k + 2; j < kr; ++j) {
        trail += delimiter;
        trail += pair.reasoning[j];
      }
      seq.push_back({Channel::kThink, std::move(trail)});
      break;
    }
  }
  return sample;
}

InterleavedSample build_interleaved(const Triple& triple, const BoundaryVector& boundaries,
                                    std::string_view delimiter) {
  return build_interleaved(segment(triple, delimiter), boundaries, triple.id, delimiter);
}

}  // namespace interleave
