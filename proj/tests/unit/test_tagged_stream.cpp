#include <doctest.h>

#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "interleave/errors.hpp"
#include "interleave/tagged_stream.hpp"
#include "interleave/tokenizer.hpp"
#include "support/oracles.hpp"

using namespace interleave;

namespace {

std::vector<Channel> channels_of(std::string_view pattern) { return TokenStream::from_pattern(pattern).channels; }

// Random canonical tagged text: alternating channels, non-empty spans.
std::string random_canonical(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> spans(0, 6);
  std::bernoulli_distribution coin(0.5);
  bool think = coin(rng);
  std::string out;
  for (int i = spans(rng); i > 0; --i) {
    const auto body = testing::random_block(rng);
    out += think ? "<think>" + body + "</think>" : "<speak>" + body + "</speak>";
    think = !think;
  }
  return out;
}

}  // namespace

TEST_CASE("parse_tagged_text examples") {
  const auto t = parse_tagged_text("<think>ab</think><speak>c</speak>");
  REQUIRE(t.segments().size() == 2);
  CHECK(t.segments()[0] == Segment{Channel::kThink, "ab"});
  CHECK(t.segments()[1] == Segment{Channel::kSpeak, "c"});

  const auto merged = parse_tagged_text("<think>a</think><think>b</think>");
  REQUIRE(merged.segments().size() == 1);
  CHECK(merged.segments()[0] == Segment{Channel::kThink, "ab"});

  try {
    parse_tagged_text("<think>a");
    FAIL("expected MalformedTags");
  } catch (const MalformedTags& e) {
    CHECK(e.offset() == 0);
  }
}

TEST_CASE("parse_tagged_text rejects malformed input") {
  CHECK_THROWS_AS(parse_tagged_text("hello"), MalformedTags);
  CHECK_THROWS_AS(parse_tagged_text("<think>a</speak>"), MalformedTags);
  CHECK_THROWS_AS(parse_tagged_text("<think>a<speak>b</speak></think>"), MalformedTags);
  CHECK_THROWS_AS(parse_tagged_text("<think>a</think> <speak>b</speak>"), MalformedTags);
  try {
    parse_tagged_text("<think>a</think>xx");
    FAIL("expected MalformedTags");
  } catch (const MalformedTags& e) {
    CHECK(e.offset() == 16);
  }
  CHECK(parse_tagged_text("").empty());
  CHECK(parse_tagged_text("<think></think>").empty());
}

TEST_CASE("custom tags") {
  TagConfig cfg{"[R]", "[/R]", "[A]", "[/A]"};
  const auto t = parse_tagged_text("[R]x[/R][A]y[/A]", cfg);
  CHECK(serialize(t, cfg) == "[R]x[/R][A]y[/A]");
  CHECK_THROWS_AS((TagConfig{"<t>", "<t>", "<s>", "</s>"}.validated()), ConfigError);
  CHECK_THROWS_AS((TagConfig{"", "</t>", "<s>", "</s>"}.validated()), ConfigError);
  CHECK_THROWS_AS((TagConfig{"<t", "<t>", "<s>", "</s>"}.validated()), ConfigError);
}

TEST_CASE("serialize examples") {
  const auto t = Trajectory::from_segments({{Channel::kThink, "ab"}, {Channel::kSpeak, "c"}});
  CHECK(serialize(t) == "<think>ab</think><speak>c</speak>");
  CHECK(serialize(Trajectory{}) == "");
}

TEST_CASE("round trip over random canonical strings") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 500; ++i) {
    const auto text = random_canonical(rng);
    const auto traj = parse_tagged_text(text);
    CHECK(serialize(traj) == text);
    CHECK(parse_tagged_text(serialize(traj)) == traj);
    for (std::size_t s = 1; s < traj.segments().size(); ++s) {
      CHECK(traj.segments()[s].channel != traj.segments()[s - 1].channel);
    }
  }
}

TEST_CASE("tokenize examples") {
  CHECK(tokenize("a  b\nc", TokenizerId::kWhitespace) == std::vector<std::string>{"a", "b", "c"});
  CHECK(tokenize("ab", TokenizerId::kChar) == std::vector<std::string>{"a", "b"});
  CHECK(tokenize("", TokenizerId::kWhitespace).empty());
  CHECK_THROWS_AS(tokenizer_from_string("bpe"), UnknownTokenizer);
  // U+00A0 is whitespace; e + combining acute is one cluster.
  CHECK(tokenize("a\xC2\xA0" "b", TokenizerId::kWhitespace).size() == 2);
  CHECK(tokenize("e\xCC\x81x", TokenizerId::kChar) == std::vector<std::string>{"e\xCC\x81", "x"});
  CHECK(count_tokens("a  b\nc", TokenizerId::kWhitespace) == 3);
}

TEST_CASE("project_channel examples") {
  const auto t = Trajectory::from_segments(
      {{Channel::kThink, "r1"}, {Channel::kSpeak, "a1"}, {Channel::kThink, "r2"}, {Channel::kSpeak, "a2"}});
  CHECK(project_channel(t, Channel::kSpeak, "\n\n") == "a1\n\na2");
  CHECK(project_channel(t, Channel::kThink, "\n\n") == "r1\n\nr2");
  CHECK(project_channel(Trajectory{}, Channel::kSpeak, "\n\n") == "");
  CHECK(project_channel(Trajectory{}, Channel::kThink, "\n\n") == "");
}

TEST_CASE("speak_blocks examples") {
  CHECK(speak_blocks(TokenStream::from_pattern("RRRAARRA")) == std::vector<SpeakBlock>{{4, 2}, {8, 1}});
  CHECK(speak_blocks(TokenStream::from_pattern("AAAA")) == std::vector<SpeakBlock>{{1, 4}});
  CHECK(speak_blocks(TokenStream::from_pattern("RRR")).empty());
  const auto t = parse_tagged_text("<think>a b c</think><speak>d e</speak><think>f g</think><speak>h</speak>");
  CHECK(speak_blocks(t) == std::vector<SpeakBlock>{{4, 2}, {8, 1}});
}

TEST_CASE("speak_blocks maximality and conservation") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 300; ++i) {
    const auto traj = parse_tagged_text(random_canonical(rng));
    const auto stream = TokenStream::from_trajectory(traj);
    const auto think = count_tokens(project_channel(traj, Channel::kThink, "\n\n"), TokenizerId::kWhitespace);
    const auto speak = count_tokens(project_channel(traj, Channel::kSpeak, "\n\n"), TokenizerId::kWhitespace);
    CHECK(think + speak == traj.total_tokens());
    CHECK(stream.size() == traj.total_tokens());

    std::size_t covered = 0;
    for (const auto& b : speak_blocks(stream)) {
      REQUIRE(b.length >= 1);
      if (b.onset > 1) CHECK(stream.channels[b.onset - 2] == Channel::kThink);
      const auto end = b.onset + b.length - 1;
      if (end < stream.size()) CHECK(stream.channels[end] == Channel::kThink);
      for (std::size_t p = b.onset; p <= end; ++p) CHECK(stream.channels[p - 1] == Channel::kSpeak);
      covered += b.length;
    }
    CHECK(covered == traj.speak_tokens());
  }
}

TEST_CASE("char tokenizer conservation via segment counts") {
  const auto t = parse_tagged_text("<think>ab c</think><speak>d\xC3\xA9</speak>", {}, TokenizerId::kChar);
  CHECK(t.think_tokens() == 4);
  CHECK(t.speak_tokens() == 2);
  CHECK(TokenStream::from_trajectory(t).size() == 6);
}

TEST_CASE("pre-tokenized ingestion") {
  const auto j = nlohmann::json::parse(R"([{"t":"a","c":"think"},{"t":"b","c":"speak"}])");
  const auto s = token_stream_from_json(j);
  CHECK(s.channels == channels_of("RA"));
  CHECK(s.tokens == std::vector<std::string>{"a", "b"});
}
