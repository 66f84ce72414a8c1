#include "interleave/alignment.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <limits>
#include <thread>

#include "interleave/errors.hpp"

namespace interleave {
namespace {

std::string join(const std::vector<std::string>& blocks, std::size_t begin, std::size_t end,
                 std::string_view delimiter) {
  std::string out;
  for (std::size_t i = begin; i < end; ++i) {
    if (i > begin) out += delimiter;
    out += blocks[i];
  }
  return out;
}

DeciderQuery make_query(const SegmentedPair& pair, std::string_view problem, std::size_t k,
                        std::size_t covered, std::string_view delimiter) {
  DeciderQuery q;
  q.state.problem = std::string(problem);
  q.state.processed_thoughts = join(pair.reasoning, 0, k - 1, delimiter);
  q.state.current_thought = pair.reasoning[k - 1];
  q.state.covered_responses = join(pair.answer, 0, covered, delimiter);
  q.state.remaining_blocks.assign(pair.answer.begin() + static_cast<std::ptrdiff_t>(covered), pair.answer.end());
  q.reasoning_prefix = k;
  q.reasoning_count = pair.reasoning_count();
  q.covered = covered;
  q.answer_count = pair.answer_count();
  return q;
}

void check_pair(const SegmentedPair& pair) {
  if (pair.reasoning.empty() || pair.answer.empty()) {
    throw InvariantViolation("segmented pair needs at least one reasoning and one answer block");
  }
}

}  // namespace

BoundaryVector monotone_repair(const RawCounts& raw, std::size_t answer_count) {
  if (raw.semantics != RawCounts::Semantics::kAbsolute) {
    throw InvariantViolation("monotone repair expects absolute counts");
  }
  if (raw.counts.empty()) throw InvariantViolation("no counts to repair");
  BoundaryVector out;
  out.answer_count = answer_count;
  out.boundaries.reserve(raw.counts.size());
  std::size_t running = 0;
  for (auto c : raw.counts) {
    running = std::max(running, std::min(c, answer_count));
    out.boundaries.push_back(running);
  }
  out.boundaries.back() = answer_count;
  return out;
}

std::optional<std::size_t> ask_count(EntailmentOracle& oracle, const DeciderQuery& query,
                                     int max_retries) {
  for (int attempt = 0; attempt <= max_retries; ++attempt) {
    const auto body = oracle.ask(query);
    try {
      return parse_decider_response(body, query.state.remaining_blocks.size());
    } catch (const Unparseable&) {
    }
  }
  return std::nullopt;
}

DeciderQuery absolute_query(const SegmentedPair& pair, std::string_view problem, std::size_t k,
                            std::string_view delimiter) {
  return make_query(pair, problem, k, 0, delimiter);
}

AlignmentResult align_sequential(const SegmentedPair& pair, std::string_view problem,
                                 EntailmentOracle& oracle, int max_retries,
                                 std::string_view delimiter) {
  check_pair(pair);
  const std::size_t kr = pair.reasoning_count();
  const std::size_t ka = pair.answer_count();

  AlignmentResult result;
  result.raw.semantics = RawCounts::Semantics::kIncremental;
  auto& bounds = result.boundaries.boundaries;
  result.boundaries.answer_count = ka;

  std::size_t covered = 0;
  for (std::size_t k = 1; k < kr; ++k) {
    std::size_t count = 0;
    // Once everything is covered the builder stops; no need to ask.
    if (covered < ka) {
      count = ask_count(oracle, make_query(pair, problem, k, covered, delimiter), max_retries).value_or(0);
    }
    count = std::min(count, ka - covered);
    result.raw.counts.push_back(count);
    covered += count;
    bounds.push_back(covered);
  }
  result.raw.counts.push_back(ka - covered);
  bounds.push_back(ka);
  return result;
}

AlignmentResult align_parallel(const SegmentedPair& pair, std::string_view problem,
                               EntailmentOracle& oracle, const OracleConfig& cfg,
                               std::string_view delimiter) {
  check_pair(pair);
  cfg.validate();
  const std::size_t kr = pair.reasoning_count();
  const std::size_t ka = pair.answer_count();
  const std::size_t checks = kr - 1;
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  struct Outcome {
    std::optional<std::size_t> count;
    std::exception_ptr error;
  };
  std::vector<Outcome> outcomes(checks);
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> full_at{kNone};  // lowest 0-based check seen at full coverage

  auto worker = [&] {
    for (std::size_t i = next++; i < checks; i = next++) {
      if (cfg.cancel_on_full_coverage && i > full_at.load()) continue;
      try {
        auto count = ask_count(oracle, make_query(pair, problem, i + 1, 0, delimiter), cfg.max_retries);
        outcomes[i].count = count;
        if (cfg.cancel_on_full_coverage && count && *count >= ka) {
          auto seen = full_at.load();
          while (i < seen && !full_at.compare_exchange_weak(seen, i)) {
          }
        }
      } catch (const RemoteUnavailable&) {
        outcomes[i].error = std::current_exception();
      }
    }
  };

  const std::size_t threads = std::min(cfg.concurrency, checks);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  // Checks past the first full-coverage index are cancelled whether or not
  // they happened to run; their answers (and errors) are discarded.
  const std::size_t cutoff = cfg.cancel_on_full_coverage ? full_at.load() : kNone;
  AlignmentResult result;
  result.raw.semantics = RawCounts::Semantics::kAbsolute;
  for (std::size_t i = 0; i < checks; ++i) {
    if (cutoff != kNone && i > cutoff) {
      result.raw.counts.push_back(ka);
      ++result.cancelled_checks;
      continue;
    }
    if (outcomes[i].error) std::rethrow_exception(outcomes[i].error);
    result.raw.counts.push_back(outcomes[i].count.value_or(0));
  }
  result.raw.counts.push_back(ka);
  if (cutoff != kNone) result.cancelled_from = cutoff + 1;
  result.boundaries = monotone_repair(result.raw, ka);
  return result;
}

}  // namespace interleave
