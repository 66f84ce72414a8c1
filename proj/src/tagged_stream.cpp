#include "interleave/tagged_stream.hpp"

#include <array>

#include <nlohmann/json.hpp>

#include "interleave/errors.hpp"

namespace interleave {

std::string_view to_string(Channel c) noexcept { return c == Channel::kThink ? "think" : "speak"; }

Channel channel_from_string(std::string_view name) {
  if (name == "think") return Channel::kThink;
  if (name == "speak") return Channel::kSpeak;
  throw Error("unknown channel '" + std::string(name) + "'");
}

const TagConfig& TagConfig::validated() const {
  const std::array<const std::string*, 4> markers{&think_open, &think_close, &speak_open,
                                                  &speak_close};
  for (std::size_t i = 0; i < markers.size(); ++i) {
    if (markers[i]->empty()) throw ConfigError("tag markers must be non-empty");
    for (std::size_t j = 0; j < markers.size(); ++j) {
      if (i == j) continue;
      if (markers[j]->find(*markers[i]) != std::string::npos) {
        throw ConfigError("tag marker '" + *markers[i] + "' collides with '" + *markers[j] + "'");
      }
    }
  }
  return *this;
}

Trajectory Trajectory::from_segments(std::vector<Segment> segments, TokenizerId tokenizer) {
  Trajectory t(tokenizer);
  for (auto& seg : segments) {
    if (seg.text.empty()) continue;
    if (!t.segments_.empty() && t.segments_.back().channel == seg.channel) {
      t.segments_.back().text += seg.text;
    } else {
      t.segments_.push_back(std::move(seg));
    }
  }
  return t;
}

std::size_t Trajectory::think_tokens() const {
  std::size_t n = 0;
  for (const auto& s : segments_) {
    if (s.channel == Channel::kThink) n += count_tokens(s.text, tokenizer_);
  }
  return n;
}

std::size_t Trajectory::speak_tokens() const {
  std::size_t n = 0;
  for (const auto& s : segments_) {
    if (s.channel == Channel::kSpeak) n += count_tokens(s.text, tokenizer_);
  }
  return n;
}

TokenStream TokenStream::from_trajectory(const Trajectory& traj) {
  TokenStream out;
  if (traj.tokenizer() == TokenizerId::kChar) out.joiner.clear();
  for (const auto& seg : traj.segments()) {
    auto toks = tokenize(seg.text, traj.tokenizer());
    out.channels.insert(out.channels.end(), toks.size(), seg.channel);
    for (auto& t : toks) out.tokens.push_back(std::move(t));
  }
  return out;
}

TokenStream TokenStream::from_channels(std::vector<Channel> channels) {
  TokenStream out;
  out.tokens.assign(channels.size(), std::string{});
  out.channels = std::move(channels);
  return out;
}

TokenStream TokenStream::from_pattern(std::string_view pattern) {
  std::vector<Channel> ch;
  for (char c : pattern) {
    if (c == 'R') ch.push_back(Channel::kThink);
    else if (c == 'A') ch.push_back(Channel::kSpeak);
  }
  return from_channels(std::move(ch));
}

Trajectory parse_tagged_text(std::string_view text, const TagConfig& cfg, TokenizerId tokenizer) {
  cfg.validated();
  struct Marker {
    const std::string* open;
    const std::string* close;
    Channel channel;
  };
  const std::array<Marker, 2> kinds{Marker{&cfg.think_open, &cfg.think_close, Channel::kThink},
                                    Marker{&cfg.speak_open, &cfg.speak_close, Channel::kSpeak}};
  const std::array<const std::string*, 4> all{&cfg.think_open, &cfg.think_close, &cfg.speak_open,
                                              &cfg.speak_close};

  // Earliest occurrence of any marker at or after `from`.
  auto next_marker = [&](std::size_t from) -> std::pair<std::size_t, const std::string*> {
    std::size_t best = std::string_view::npos;
    const std::string* which = nullptr;
    for (const auto* m : all) {
      const auto p = text.find(*m, from);
      if (p < best) {
        best = p;
        which = m;
      }
    }
    return {best, which};
  };

  std::vector<Segment> segments;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const Marker* opened = nullptr;
    for (const auto& k : kinds) {
      if (text.substr(pos, k.open->size()) == *k.open) opened = &k;
    }
    if (opened == nullptr) {
      const auto [p, m] = next_marker(pos);
      if (p == pos) throw MalformedTags(pos, "closing marker '" + *m + "' without opener");
      throw MalformedTags(pos, "text outside any tagged span");
    }
    const std::size_t body = pos + opened->open->size();
    const auto [p, m] = next_marker(body);
    if (p == std::string_view::npos) throw MalformedTags(pos, "unterminated '" + *opened->open + "'");
    if (m != opened->close) throw MalformedTags(p, "unexpected '" + *m + "' inside '" + *opened->open + "'");
    segments.push_back({opened->channel, std::string(text.substr(body, p - body))});
    pos = p + m->size();
  }
  return Trajectory::from_segments(std::move(segments), tokenizer);
}

std::string serialize(const Trajectory& traj, const TagConfig& cfg) {
  std::string out;
  for (const auto& seg : traj.segments()) {
    const bool think = seg.channel == Channel::kThink;
    out += think ? cfg.think_open : cfg.speak_open;
    out += seg.text;
    out += think ? cfg.think_close : cfg.speak_close;
  }
  return out;
}

std::string project_channel(const Trajectory& traj, Channel ch, std::string_view delimiter) {
  std::string out;
  bool first = true;
  for (const auto& seg : traj.segments()) {
    if (seg.channel != ch) continue;
    if (!first) out += delimiter;
    out += seg.text;
    first = false;
  }
  return out;
}

std::vector<SpeakBlock> speak_blocks(const TokenStream& stream) {
  std::vector<SpeakBlock> blocks;
  const auto& ch = stream.channels;
  for (std::size_t i = 0; i < ch.size(); ++i) {
    if (ch[i] != Channel::kSpeak) continue;
    if (i > 0 && ch[i - 1] == Channel::kSpeak) {
      ++blocks.back().length;
    } else {
      blocks.push_back({i + 1, 1});
    }
  }
  return blocks;
}

std::vector<SpeakBlock> speak_blocks(const Trajectory& traj) {
  return speak_blocks(TokenStream::from_trajectory(traj));
}

TokenStream token_stream_from_json(const nlohmann::json& tokens) {
  TokenStream out;
  for (const auto& tok : tokens) {
    out.tokens.push_back(tok.at("t").get<std::string>());
    out.channels.push_back(channel_from_string(tok.at("c").get<std::string>()));
  }
  return out;
}

}  // namespace interleave
