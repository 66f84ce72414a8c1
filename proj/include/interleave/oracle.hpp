#pragma once

#include <atomic>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <semaphore>
#include <string>

#include "interleave/decider.hpp"

namespace interleave {

class ReplayCache;

enum class OracleKind { kRemote, kMock, kReplay };

std::string_view to_string(OracleKind k) noexcept;
OracleKind oracle_kind_from_string(std::string_view s);

struct OracleConfig {
  OracleKind kind = OracleKind::kMock;
  std::string endpoint;
  std::string model_name;
  std::string api_key_env = "OPENAI_API_KEY";
  int max_retries = 3;
  std::chrono::milliseconds timeout{60'000};
  std::chrono::milliseconds backoff_base{500};
  std::chrono::milliseconds backoff_cap{8'000};
  std::size_t concurrency = 8;
  /// Parallel alignment only: stop pending prefix checks after full coverage.
  bool cancel_on_full_coverage = true;

  /// Throws ConfigError on violated invariants.
  void validate() const;
};

/// One prefix-entailment question. The rendered state is what a remote
/// model sees; the indices let a mock answer without reading text.
struct DeciderQuery {
  DeciderState state;
  std::size_t reasoning_prefix = 0;  // k: reasoning blocks seen, current included
  std::size_t reasoning_count = 0;   // K_R
  std::size_t covered = 0;           // answer blocks already covered
  std::size_t answer_count = 0;      // K_A
};

/// Answers decider queries with the raw model text. Implementations must be
/// safe to call from several threads at once.
class EntailmentOracle {
 public:
  virtual ~EntailmentOracle() = default;
  virtual std::string ask(const DeciderQuery& query) = 0;
};

/// Ground-truth boundary b(k, K_R, K_A): answer blocks supported by the first
/// k reasoning blocks. Should be non-decreasing in k.
using BoundaryFn = std::function<std::size_t(std::size_t k, std::size_t kr, std::size_t ka)>;

/// floor(k * K_A / K_R): answer unlocked evenly along the reasoning.
BoundaryFn proportional_boundary();
/// min(k - 1, K_A): one block per reasoning step, starting after the first.
BoundaryFn lagged_boundary();

struct MockNoise {
  double under = 0.0;    // report a random smaller count
  double over = 0.0;     // report a random larger count (may exceed M)
  double garbage = 0.0;  // return text with no JSON object
};

/// Deterministic stand-in for the decider model. Noise draws are seeded from
/// (seed, query key) so answers never depend on call order or thread.
class MockOracle final : public EntailmentOracle {
 public:
  explicit MockOracle(BoundaryFn truth = proportional_boundary(), MockNoise noise = {},
                      std::uint64_t seed = 0);
  std::string ask(const DeciderQuery& query) override;

 private:
  BoundaryFn truth_;
  MockNoise noise_;
  std::uint64_t seed_;
};

/// Serves responses strictly from a replay cache; misses throw ReplayMiss.
class ReplayOracle final : public EntailmentOracle {
 public:
  explicit ReplayOracle(const ReplayCache& cache) : cache_(cache) {}
  std::string ask(const DeciderQuery& query) override;

 private:
  const ReplayCache& cache_;
};

/// Answers from the cache when possible, otherwise asks `inner` and appends
/// the response to the cache.
class RecordingOracle final : public EntailmentOracle {
 public:
  RecordingOracle(EntailmentOracle& inner, ReplayCache& cache) : inner_(inner), cache_(cache) {}
  std::string ask(const DeciderQuery& query) override;

  std::size_t hits() const noexcept { return hits_.load(); }
  std::size_t misses() const noexcept { return misses_.load(); }

 private:
  EntailmentOracle& inner_;
  ReplayCache& cache_;
  std::atomic<std::size_t> hits_{0};
  std::atomic<std::size_t> misses_{0};
};

/// Caps the number of in-flight queries across every caller.
class ThrottledOracle final : public EntailmentOracle {
 public:
  ThrottledOracle(EntailmentOracle& inner, std::size_t limit);
  std::string ask(const DeciderQuery& query) override;

 private:
  EntailmentOracle& inner_;
  std::counting_semaphore<> slots_;
};

/// Builds the oracle described by `cfg`. Replay needs a loaded cache.
std::unique_ptr<EntailmentOracle> make_oracle(const OracleConfig& cfg, std::uint64_t seed,
                                              const ReplayCache* cache = nullptr,
                                              MockNoise noise = {});

}  // namespace interleave
