#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>

#include "interleave/alignment.hpp"
#include "interleave/errors.hpp"
#include "interleave/oracle.hpp"
#include "interleave/pacing_metrics.hpp"
#include "interleave/records.hpp"
#include "interleave/reward_engine.hpp"

namespace interleave {

enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitConfig = 2 };

struct PipelineConfig {
  std::filesystem::path input;
  std::filesystem::path output;
  std::string delimiter = "\n\n";
  TagConfig tags;
  TokenizerId tokenizer = TokenizerId::kWhitespace;
  OracleMode mode = OracleMode::kSequential;
  OracleConfig oracle;
  MockNoise mock_noise;
  std::optional<std::filesystem::path> replay_cache;
  bool shape = false;
  ShapingConfig shaping;
  ObjectiveConfig objective;
  SubstantivePredicateConfig substantive;
  double eps_num = kDefaultEpsNum;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;

  /// Throws ConfigError.
  void validate() const;
};

/// Yields triples in file order; a malformed line comes back as its
/// SchemaError instead of a Triple, so callers decide whether to stop.
class TripleStream {
 public:
  explicit TripleStream(const std::filesystem::path& path) : reader_(path) {}
  using Item = std::variant<Triple, SchemaError>;
  std::optional<Item> next();
  /// Line number of the item last returned.
  std::size_t line() const noexcept { return reader_.line_number(); }

 private:
  JsonlReader reader_;
};

/// Normalize, split, align and build one triple.
InterleavedSample build_sample(const Triple& triple, EntailmentOracle& oracle, const PipelineConfig& cfg);

struct BuildSummary {
  std::size_t records = 0;
  std::size_t failures = 0;
  std::size_t cancelled = 0;  // samples whose parallel alignment cancelled checks
};

/// Builds every triple of cfg.input with `oracle` into cfg.output, in input
/// order. Failures go to "<output>.failures.jsonl".
BuildSummary run_build(const PipelineConfig& cfg, EntailmentOracle& oracle, std::ostream& log);

// Subcommands. Each returns an ExitCode and reports progress on `log`.
int cmd_build(const PipelineConfig& cfg, std::ostream& log);
int cmd_metrics(const PipelineConfig& cfg, std::ostream& log);
int cmd_reward(const PipelineConfig& cfg, std::ostream& log);
int cmd_replay_record(const PipelineConfig& cfg, std::ostream& log);

}  // namespace interleave
