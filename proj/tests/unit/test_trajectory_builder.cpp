#include <doctest.h>

#include <random>
#include <string>
#include <vector>

#include "interleave/errors.hpp"
#include "interleave/trajectory_builder.hpp"
#include "support/oracles.hpp"

using namespace interleave;

namespace {

using Segs = std::vector<Segment>;

Segment think(std::string s) { return {Channel::kThink, std::move(s)}; }
Segment speak(std::string s) { return {Channel::kSpeak, std::move(s)}; }

std::string project(const Segs& segs, Channel ch) {
  return project_channel(Trajectory::from_segments(segs), ch, "\n\n");
}

std::size_t strict_increases(const std::vector<std::size_t>& b) {
  std::size_t n = b.front() > 0 ? 1 : 0;
  for (std::size_t i = 1; i < b.size(); ++i) n += b[i] > b[i - 1] ? 1 : 0;
  return n;
}

}  // namespace

TEST_CASE("normalize_whitespace examples") {
  CHECK(normalize_whitespace("a\n\n\nb") == "a\n\nb");
  CHECK(normalize_whitespace("a \n \n b") == "a\n\nb");
  CHECK(normalize_whitespace("a\nb") == "a\nb");
  CHECK(normalize_whitespace("  a  b \n") == "a  b");
  CHECK(normalize_whitespace("a\r\n\r\nb") == "a\n\nb");
}

TEST_CASE("split_blocks examples") {
  CHECK(split_blocks("a\n\nb\n\nc", "\n\n") == std::vector<std::string>{"a", "b", "c"});
  CHECK(split_blocks("x", "\n\n") == std::vector<std::string>{"x"});
  CHECK(split_blocks("a\n\n", "\n\n") == std::vector<std::string>{"a"});
  CHECK_THROWS_AS(split_blocks("", "\n\n"), EmptyAfterSplit);
  CHECK_THROWS_AS(split_blocks("\n\n\n\n", "\n\n"), EmptyAfterSplit);
}

TEST_CASE("answer_increment examples") {
  const std::vector<std::string> a{"a1", "a2", "a3"};
  CHECK(answer_increment(a, 0, 2) == "a1\n\na2");
  CHECK(answer_increment(std::vector<std::string>{"a1"}, 0, 1) == "a1");
  CHECK_THROWS_AS(answer_increment(a, 2, 2), RangeError);
  CHECK_THROWS_AS(answer_increment(a, 1, 4), RangeError);
}

TEST_CASE("build_interleaved examples") {
  {
    SegmentedPair p{{"r1", "r2", "r3"}, {"a1", "a2"}};
    const auto s = build_interleaved(p, {{0, 1, 2}, 2});
    CHECK(s.sequence == Segs{think("r1\n\nr2"), speak("a1"), think("r3"), speak("a2")});
  }
  {
    SegmentedPair p{{"r1", "r2"}, {"a1"}};
    const auto s = build_interleaved(p, {{1, 1}, 1});
    CHECK(s.sequence == Segs{think("r1"), speak("a1"), think("r2")});
  }
  {
    SegmentedPair p{{"r1", "r2", "r3"}, {"a1", "a2"}};
    const auto s = build_interleaved(p, {{0, 0, 2}, 2});
    CHECK(s.sequence == Segs{think("r1\n\nr2\n\nr3"), speak("a1\n\na2")});
  }
}

TEST_CASE("build_interleaved rejects malformed boundaries") {
  SegmentedPair p{{"r1", "r2"}, {"a1", "a2"}};
  CHECK_THROWS_AS(build_interleaved(p, {{0, 1}, 2}), InvariantViolation);      // no terminal safeguard
  CHECK_THROWS_AS(build_interleaved(p, {{2, 1}, 2}), InvariantViolation);      // decreasing
  CHECK_THROWS_AS(build_interleaved(p, {{0, 1, 2}, 2}), InvariantViolation);   // wrong length
  CHECK_THROWS_AS(build_interleaved(p, {{0, 3}, 3}), InvariantViolation);      // wrong K_A
}

TEST_CASE("build from a raw triple normalizes first") {
  Triple t{"t1", "Q", "r1\n\n\n r2 \n", "a1\n\na2\n\n"};
  const auto s = build_interleaved(t, {{1, 2}, 2});
  CHECK(s.id == "t1");
  CHECK(s.sequence == Segs{think("r1"), speak("a1"), think("r2"), speak("a2")});
}

TEST_CASE("content preservation and structure over random inputs") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 500; ++i) {
    const auto r = normalize_whitespace(testing::join_blocks(testing::random_blocks(rng, 1, 8)));
    const auto a = normalize_whitespace(testing::join_blocks(testing::random_blocks(rng, 1, 5)));
    const auto pair = segment(Triple{"x", "", r, a});
    const BoundaryVector bv{testing::random_boundaries(rng, pair.reasoning_count(), pair.answer_count()),
                            pair.answer_count()};
    const auto s = build_interleaved(pair, bv);
    CHECK(project(s.sequence, Channel::kThink) == r);
    CHECK(project(s.sequence, Channel::kSpeak) == a);
    REQUIRE(!s.sequence.empty());
    CHECK(s.sequence.front().channel == Channel::kThink);
    std::size_t speaks = 0;
    for (std::size_t k = 0; k < s.sequence.size(); ++k) {
      if (k) CHECK(s.sequence[k].channel != s.sequence[k - 1].channel);
      speaks += s.sequence[k].channel == Channel::kSpeak ? 1 : 0;
    }
    CHECK(speaks == strict_increases(bv.boundaries));
    const auto again = build_interleaved(pair, bv);
    CHECK(again.sequence == s.sequence);
  }
}
