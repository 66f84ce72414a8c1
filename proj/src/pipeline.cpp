#include "interleave/pipeline.hpp"

#include <atomic>
#include <fstream>
#include <ostream>
#include <thread>

#include "interleave/errors.hpp"
#include "interleave/remote_client.hpp"
#include "interleave/replay_cache.hpp"

namespace interleave {
namespace {

// Results are written in input order; this many triples are in flight.
constexpr std::size_t kWindowPerJob = 4;

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.empty()) throw ConfigError("an --output path is required");
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open output " + path.string());
  return out;
}

void write_line(std::ostream& out, const ordered_json& rec) {
  out << rec.dump() << '\n';
  if (!out) throw IoError("write failed");
}

template <typename Fn>
void parallel_for(std::size_t count, std::size_t jobs, Fn&& fn) {
  const std::size_t threads = std::min(jobs, count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  }
}

struct BuildItem {
  std::size_t line = 0;
  std::optional<Triple> triple;
  std::optional<ordered_json> record;
  std::string error;
  bool cancelled = false;
};

template <typename Fn>
int guarded(std::ostream& log, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    log << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const CacheCorrupt& e) {
    log << "error: " << e.what() << '\n';
    return kExitFailure;
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

std::optional<TokenStream> stream_from_record(const nlohmann::json& rec, const PipelineConfig& cfg,
                                              std::size_t line) {
  if (const auto t = rec.find("tokens"); t != rec.end()) return token_stream_from_json(*t);
  if (rec.contains("segments")) {
    auto sample = sample_from_json(rec, line);
    return TokenStream::from_trajectory(Trajectory::from_segments(std::move(sample.sequence), cfg.tokenizer));
  }
  if (const auto t = rec.find("tagged_text"); t != rec.end()) {
    return TokenStream::from_trajectory(parse_tagged_text(t->get<std::string>(), cfg.tags, cfg.tokenizer));
  }
  return std::nullopt;
}

}  // namespace

void PipelineConfig::validate() const {
  tags.validated();
  if (delimiter.empty()) throw ConfigError("delimiter must be non-empty");
  if (jobs < 1) throw ConfigError("jobs must be >= 1");
  oracle.validate();
  shaping.validate();
  objective.validate();
  substantive.validate();
  if (oracle.kind == OracleKind::kReplay && !replay_cache) {
    throw ConfigError("replay oracle requires --replay-cache");
  }
  for (double p : {mock_noise.under, mock_noise.over, mock_noise.garbage}) {
    if (p < 0 || p > 1) throw ConfigError("mock noise probabilities must lie in [0, 1]");
  }
  if (!input.empty() && !std::filesystem::exists(input)) {
    throw ConfigError("input does not exist: " + input.string());
  }
}

std::optional<TripleStream::Item> TripleStream::next() {
  auto line = reader_.next();
  if (!line) return std::nullopt;
  try {
    return Item{triple_from_line(*line)};
  } catch (const SchemaError& e) {
    return Item{e};
  }
}

InterleavedSample build_sample(const Triple& triple, EntailmentOracle& oracle, const PipelineConfig& cfg) {
  SegmentedPair pair;
  try {
    pair = segment(triple, cfg.delimiter);
  } catch (const EmptyAfterSplit& e) {
    throw SchemaError(0, "triple " + triple.id + ": " + e.what());
  }
  const auto aligned = cfg.mode == OracleMode::kParallel
                           ? align_parallel(pair, triple.prompt, oracle, cfg.oracle, cfg.delimiter)
                           : align_sequential(pair, triple.prompt, oracle, cfg.oracle.max_retries, cfg.delimiter);
  auto sample = build_interleaved(pair, aligned.boundaries, triple.id, cfg.delimiter);
  sample.oracle_mode = cfg.mode;
  sample.cancelled_from = aligned.cancelled_from;
  return sample;
}

BuildSummary run_build(const PipelineConfig& cfg, EntailmentOracle& oracle, std::ostream& log) {
  auto out = open_output(cfg.output);
  std::ofstream failures;
  auto fail_path = cfg.output;
  fail_path += ".failures.jsonl";
  std::filesystem::remove(fail_path);

  ThrottledOracle throttled(oracle, cfg.oracle.concurrency);
  TripleStream triples(cfg.input);
  BuildSummary summary;
  const std::size_t window = std::max<std::size_t>(1, cfg.jobs * kWindowPerJob);

  for (bool done = false; !done;) {
    std::vector<BuildItem> batch;
    while (batch.size() < window) {
      auto item = triples.next();
      if (!item) {
        done = true;
        break;
      }
      BuildItem b;
      b.line = triples.line();
      if (auto* t = std::get_if<Triple>(&*item)) {
        b.triple = std::move(*t);
      } else {
        const auto& err = std::get<SchemaError>(*item);
        b.error = err.what();
      }
      batch.push_back(std::move(b));
    }

    parallel_for(batch.size(), cfg.jobs, [&](std::size_t i) {
      auto& b = batch[i];
      if (!b.triple) return;
      try {
        const auto sample = build_sample(*b.triple, throttled, cfg);
        b.cancelled = sample.cancelled_from.has_value();
        b.record = to_json(sample);
      } catch (const Error& e) {
        b.error = e.what();
      }
    });

    for (auto& b : batch) {
      if (b.record) {
        write_line(out, *b.record);
        ++summary.records;
        summary.cancelled += b.cancelled ? 1 : 0;
        continue;
      }
      ++summary.failures;
      if (!failures.is_open()) {
        failures.open(fail_path, std::ios::trunc);
        if (!failures) throw IoError("cannot open failure manifest " + fail_path.string());
      }
      ordered_json f = {{"line", b.line}, {"id", b.triple ? ordered_json(b.triple->id) : ordered_json(nullptr)},
                        {"error", b.error}};
      write_line(failures, f);
      log << "failed: " << b.error << '\n';
    }
    out.flush();
    if (failures.is_open()) failures.flush();
  }

  const double rate = summary.records ? static_cast<double>(summary.cancelled) / static_cast<double>(summary.records) : 0.0;
  log << "build: " << summary.records << " record(s), " << summary.failures << " failure(s), cancellation rate "
      << rate << '\n';
  return summary;
}

int cmd_build(const PipelineConfig& cfg, std::ostream& log) {
  return guarded(log, [&] {
    cfg.validate();
    std::optional<ReplayCache> cache;
    if (cfg.oracle.kind == OracleKind::kReplay) cache.emplace(ReplayCache::load(*cfg.replay_cache));
    auto oracle = make_oracle(cfg.oracle, cfg.seed, cache ? &*cache : nullptr, cfg.mock_noise);
    const auto summary = run_build(cfg, *oracle, log);
    return summary.failures == 0 ? kExitOk : kExitFailure;
  });
}

int cmd_replay_record(const PipelineConfig& cfg, std::ostream& log) {
  return guarded(log, [&] {
    cfg.validate();
    if (cfg.oracle.kind != OracleKind::kRemote) throw ConfigError("record mode requires --oracle remote");
    if (!cfg.replay_cache) throw ConfigError("record mode requires --replay-cache");
    auto cache = ReplayCache::load(*cfg.replay_cache);
    cache.attach_writer(*cfg.replay_cache);
    RemoteOracle remote(cfg.oracle);
    RecordingOracle recorder(remote, cache);
    const auto summary = run_build(cfg, recorder, log);
    const auto total = recorder.hits() + recorder.misses();
    log << "record: " << recorder.misses() << " new response(s), cache hit rate "
        << (total ? static_cast<double>(recorder.hits()) / static_cast<double>(total) : 0.0) << '\n';
    return summary.failures == 0 ? kExitOk : kExitFailure;
  });
}

int cmd_metrics(const PipelineConfig& cfg, std::ostream& log) {
  return guarded(log, [&] {
    cfg.validate();
    JsonlReader reader(cfg.input);
    auto out = open_output(cfg.output);
    MetricsAggregate agg;
    while (auto line = reader.next()) {
      try {
        const auto rec = nlohmann::json::parse(line->text);
        auto stream = stream_from_record(rec, cfg, line->number);
        if (!stream) throw SchemaError(line->number, "record has no tokens, segments or tagged_text");
        const auto report = compute_report(*stream, rec.value("id", std::string{}), cfg.substantive);
        auto j = to_json(report);
        if (const auto gold = rec.find("gold"); gold != rec.end() && rec.contains("tagged_text") && report.ari) {
          const auto traj = parse_tagged_text(rec.at("tagged_text").get<std::string>(), cfg.tags, cfg.tokenizer);
          j["objective"] = objective(traj, gold->get<std::string>(), outcome_reward, cfg.objective,
                                     cfg.substantive, cfg.delimiter);
        }
        write_line(out, j);
        agg.add(report);
      } catch (const nlohmann::json::exception& e) {
        agg.add_skipped();
        log << "line " << line->number << ": skipped: " << e.what() << '\n';
      } catch (const IoError&) {
        throw;
      } catch (const Error& e) {
        agg.add_skipped();
        log << "line " << line->number << ": skipped: " << e.what() << '\n';
      }
    }
    write_line(out, to_json(agg));
    log << "metrics: " << agg.count() << " record(s), " << agg.skipped() << " skipped\n";
    return kExitOk;
  });
}

int cmd_reward(const PipelineConfig& cfg, std::ostream& log) {
  return guarded(log, [&] {
    cfg.validate();
    JsonlReader reader(cfg.input);
    auto out = open_output(cfg.output);
    RewardOptions opts;
    opts.shape = cfg.shape;
    opts.shaping = cfg.shaping;
    opts.eps_num = cfg.eps_num;
    opts.tags = cfg.tags;
    opts.tokenizer = cfg.tokenizer;
    opts.delimiter = cfg.delimiter;

    std::size_t groups = 0, kept = 0, skipped = 0;
    while (auto line = reader.next()) {
      try {
        const auto rec = nlohmann::json::parse(line->text);
        std::vector<std::string> rollouts;
        for (const auto& r : rec.at("rollouts")) rollouts.push_back(r.at("tagged_text").get<std::string>());
        const auto result = evaluate_group(rec.at("group_id").get<std::string>(), rec.at("gold").get<std::string>(),
                                           rollouts, opts);
        if (!result.note.empty()) log << "group " << result.group_id << ": " << result.note << '\n';
        write_line(out, to_json(result));
        ++groups;
        kept += result.kept ? 1 : 0;
      } catch (const nlohmann::json::exception& e) {
        ++skipped;
        log << "line " << line->number << ": skipped: " << e.what() << '\n';
      }
    }
    log << "reward: " << groups << " group(s), " << kept << " kept, " << skipped << " skipped\n";
    return kExitOk;
  });
}

}  // namespace interleave
