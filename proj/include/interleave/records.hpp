#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "interleave/pacing_metrics.hpp"
#include "interleave/reward_engine.hpp"
#include "interleave/trajectory_builder.hpp"

namespace interleave {

using ordered_json = nlohmann::ordered_json;

/// Reads a line-delimited file one record at a time, tracking 1-based line
/// numbers. Blank lines are skipped.
class JsonlReader {
 public:
  explicit JsonlReader(const std::filesystem::path& path);

  struct Line {
    std::size_t number;
    std::string text;
  };
  std::optional<Line> next();
  std::size_t line_number() const noexcept { return lineno_; }

 private:
  std::ifstream in_;
  std::size_t lineno_ = 0;
};

/// Parses {"id", "prompt", "reasoning", "answer"}; throws SchemaError for a
/// malformed line, a missing or non-string field, or empty reasoning/answer.
Triple triple_from_line(const JsonlReader::Line& line);

ordered_json to_json(const InterleavedSample& sample);
/// Inverse of to_json(InterleavedSample); throws SchemaError.
InterleavedSample sample_from_json(const nlohmann::json& rec, std::size_t line = 0);

ordered_json to_json(const MetricsReport& report);
ordered_json to_json(const MetricsAggregate& agg);
ordered_json to_json(const GroupResult& group);

}  // namespace interleave
