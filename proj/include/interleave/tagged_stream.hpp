#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "interleave/tokenizer.hpp"

namespace interleave {

/// THINK tokens are private reasoning (condition future generation only);
/// SPEAK tokens are disclosed to the user.
enum class Channel { kThink, kSpeak };

std::string_view to_string(Channel c) noexcept;
/// Accepts "think" / "speak".
Channel channel_from_string(std::string_view name);

struct Segment {
  Channel channel;
  std::string text;

  friend bool operator==(const Segment&, const Segment&) = default;
};

/// Tag markers for the wire format. Validated on construction through
/// `validated()`; the default is <think>..</think> / <speak>..</speak>.
struct TagConfig {
  std::string think_open = "<think>";
  std::string think_close = "</think>";
  std::string speak_open = "<speak>";
  std::string speak_close = "</speak>";

  /// Throws ConfigError unless all markers are non-empty, pairwise distinct
  /// and none is a substring of another.
  const TagConfig& validated() const;
};

/// Canonical channel-labelled segment list: no empty segments and no two
/// adjacent segments on the same channel.
class Trajectory {
 public:
  Trajectory() = default;
  explicit Trajectory(TokenizerId tokenizer) : tokenizer_(tokenizer) {}

  /// Drops empty segments and merges adjacent same-channel ones by direct
  /// concatenation.
  static Trajectory from_segments(std::vector<Segment> segments,
                                  TokenizerId tokenizer = TokenizerId::kWhitespace);

  const std::vector<Segment>& segments() const noexcept { return segments_; }
  TokenizerId tokenizer() const noexcept { return tokenizer_; }
  bool empty() const noexcept { return segments_.empty(); }

  std::size_t think_tokens() const;
  std::size_t speak_tokens() const;
  std::size_t total_tokens() const { return think_tokens() + speak_tokens(); }

  friend bool operator==(const Trajectory&, const Trajectory&) = default;

 private:
  std::vector<Segment> segments_;
  TokenizerId tokenizer_ = TokenizerId::kWhitespace;
};

/// Flat token sequence with a channel per token. This is what the latency
/// metrics operate on; it can come from a Trajectory or be ingested already
/// tokenized.
struct TokenStream {
  std::vector<std::string> tokens;
  std::vector<Channel> channels;
  /// Glue for turning a token run back into text ("" for char tokens).
  std::string joiner = " ";

  std::size_t size() const noexcept { return channels.size(); }

  static TokenStream from_trajectory(const Trajectory& traj);
  /// Tokens without text, one per channel label. Handy in tests.
  static TokenStream from_channels(std::vector<Channel> channels);
  /// Shorthand for tests: "RRRAAR" -> think,think,think,speak,speak,think.
  static TokenStream from_pattern(std::string_view pattern);
};

/// Maximal run of SPEAK tokens; onset is a 1-indexed token position.
struct SpeakBlock {
  std::size_t onset;
  std::size_t length;

  friend bool operator==(const SpeakBlock&, const SpeakBlock&) = default;
};

Trajectory parse_tagged_text(std::string_view text, const TagConfig& cfg = {},
                             TokenizerId tokenizer = TokenizerId::kWhitespace);

std::string serialize(const Trajectory& traj, const TagConfig& cfg = {});

/// Joins every segment of channel `ch` with `delimiter`. Projecting SPEAK
/// yields the user-visible answer.
std::string project_channel(const Trajectory& traj, Channel ch, std::string_view delimiter);

std::vector<SpeakBlock> speak_blocks(const TokenStream& stream);
std::vector<SpeakBlock> speak_blocks(const Trajectory& traj);

/// Parses one pre-tokenized record {"id", "tokens": [{"t", "c"}]}.
/// Throws nlohmann::json exceptions or Error on schema problems.
TokenStream token_stream_from_json(const nlohmann::json& tokens);

}  // namespace interleave
