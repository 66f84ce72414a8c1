// interleave: build interleaved think/speak training samples, score their
// pacing, and compute group rewards for rollouts.
//
//   interleave build   --input triples.jsonl --output samples.jsonl [--mode parallel] [--oracle mock]
//   interleave record  --input triples.jsonl --output samples.jsonl --oracle remote --replay-cache cache.jsonl
//   interleave metrics --input samples.jsonl --output metrics.jsonl
//   interleave reward  --input groups.jsonl --output rewards.jsonl [--shape]
//
// Every option can also come from a flat key=value file given with --config;
// command-line flags win.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "interleave/errors.hpp"
#include "interleave/pipeline.hpp"

using namespace interleave;

int main(int argc, char** argv) {
  CLI::App app{"Interleaved reasoning data builder, pacing metrics and group rewards"};
  app.set_config("--config", "", "Read options from a key=value file");
  app.require_subcommand(1);
  app.fallthrough();

  PipelineConfig cfg;
  std::string input, output, mode = "sequential", oracle = "mock", tokenizer = "whitespace";
  std::string penalty = "batch_max_length", replay_cache;
  std::string delimiter = "\\n\\n";
  long long timeout_ms = cfg.oracle.timeout.count();
  bool no_cancel = false;

  app.add_option("--input", input, "Input JSONL file")->required();
  app.add_option("--output", output, "Output JSONL file")->required();
  app.add_option("--mode", mode, "Alignment mode")->check(CLI::IsMember({"sequential", "parallel"}));
  app.add_option("--oracle", oracle, "Entailment oracle")->check(CLI::IsMember({"remote", "mock", "replay"}));
  app.add_option("--endpoint", cfg.oracle.endpoint, "OpenAI-compatible chat-completions URL");
  app.add_option("--model", cfg.oracle.model_name, "Model name for the remote oracle");
  app.add_option("--api-key-env", cfg.oracle.api_key_env, "Environment variable holding the API key (empty: none)");
  app.add_option("--max-retries", cfg.oracle.max_retries, "Retries per oracle query")->check(CLI::NonNegativeNumber);
  app.add_option("--timeout-ms", timeout_ms, "Per-request timeout")->check(CLI::PositiveNumber);
  app.add_option("--concurrency", cfg.oracle.concurrency, "Max in-flight oracle queries")->check(CLI::PositiveNumber);
  app.add_flag("--no-cancel", no_cancel, "Parallel mode: keep checking after full coverage");
  app.add_option("--jobs", cfg.jobs, "Triples processed concurrently")->check(CLI::PositiveNumber);
  app.add_option("--delimiter", delimiter, "Block delimiter (backslash escapes allowed)");
  app.add_option("--tokenizer", tokenizer, "Token counting scheme")->check(CLI::IsMember({"whitespace", "char"}));
  app.add_flag("--shape", cfg.shape, "Reward: apply QP reward shaping");
  app.add_option("--epsilon", cfg.shaping.margin, "Shaping margin")->check(CLI::PositiveNumber);
  app.add_option("--s-min", cfg.shaping.s_min, "Constant penalty for incorrect rollouts")->check(CLI::PositiveNumber);
  app.add_option("--penalty-mode", penalty, "Incorrect-rollout scoring")
      ->check(CLI::IsMember({"constant_smin", "batch_max_length"}));
  app.add_option("--lambda", cfg.objective.lambda, "Latency weight in the objective")->check(CLI::NonNegativeNumber);
  app.add_option("--seed", cfg.seed, "Seed for the mock oracle");
  app.add_option("--mock-under", cfg.mock_noise.under, "Mock oracle: under-count probability")->check(CLI::Range(0.0, 1.0));
  app.add_option("--mock-over", cfg.mock_noise.over, "Mock oracle: over-count probability")->check(CLI::Range(0.0, 1.0));
  app.add_option("--mock-garbage", cfg.mock_noise.garbage, "Mock oracle: unparseable-answer probability")
      ->check(CLI::Range(0.0, 1.0));
  app.add_option("--replay-cache", replay_cache, "Replay cache JSONL file");

  auto* build = app.add_subcommand("build", "Align triples and emit interleaved samples");
  auto* record = app.add_subcommand("record", "Build with the remote oracle while recording a replay cache");
  auto* metrics = app.add_subcommand("metrics", "Compute pacing metrics per record plus an aggregate");
  auto* reward = app.add_subcommand("reward", "Label rollout groups and compute (shaped) advantages");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    cfg.input = input;
    cfg.output = output;
    cfg.mode = oracle_mode_from_string(mode);
    cfg.oracle.kind = oracle_kind_from_string(oracle);
    cfg.oracle.timeout = std::chrono::milliseconds(timeout_ms);
    cfg.oracle.cancel_on_full_coverage = !no_cancel;
    cfg.tokenizer = tokenizer_from_string(tokenizer);
    cfg.shaping.penalty_mode = penalty_mode_from_string(penalty);
    cfg.delimiter = CLI::detail::remove_escaped_characters(delimiter);
    if (!replay_cache.empty()) cfg.replay_cache = replay_cache;
  } catch (const Error& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  }

  if (build->parsed()) return cmd_build(cfg, std::cerr);
  if (record->parsed()) return cmd_replay_record(cfg, std::cerr);
  if (metrics->parsed()) return cmd_metrics(cfg, std::cerr);
  if (reward->parsed()) return cmd_reward(cfg, std::cerr);
  return kExitConfig;
}
