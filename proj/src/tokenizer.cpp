#include "interleave/tokenizer.hpp"

#include "interleave/errors.hpp"
#include "interleave/utf8.hpp"

namespace interleave {
namespace {

template <typename Emit>
void split_whitespace(std::string_view text, Emit&& emit) {
  std::size_t pos = 0;
  std::size_t start = std::string_view::npos;
  while (pos < text.size()) {
    const auto d = utf8::decode(text, pos);
    if (utf8::is_space(d.cp)) {
      if (start != std::string_view::npos) {
        emit(text.substr(start, pos - start));
        start = std::string_view::npos;
      }
    } else if (start == std::string_view::npos) {
      start = pos;
    }
    pos += d.len;
  }
  if (start != std::string_view::npos) emit(text.substr(start));
}

// Simplified UAX #29: CR LF stays together, extenders and ZWJ sequences
// attach to the preceding base, regional indicators pair up.
template <typename Emit>
void split_graphemes(std::string_view text, Emit&& emit) {
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t start = pos;
    auto d = utf8::decode(text, pos);
    pos += d.len;
    if (d.cp == U'\r' && pos < text.size() && text[pos] == '\n') {
      emit(text.substr(start, 2));
      ++pos;
      continue;
    }
    if (d.cp == U'\r' || d.cp == U'\n') {
      emit(text.substr(start, pos - start));
      continue;
    }
    bool paired_ri = false;
    char32_t prev = d.cp;
    while (pos < text.size()) {
      const auto next = utf8::decode(text, pos);
      if (utf8::is_extend(next.cp) || next.cp == utf8::kZeroWidthJoiner) {
        pos += next.len;
      } else if (prev == utf8::kZeroWidthJoiner) {
        pos += next.len;  // joined emoji sequence
      } else if (utf8::is_regional_indicator(prev) && utf8::is_regional_indicator(next.cp) &&
                 !paired_ri) {
        paired_ri = true;
        pos += next.len;
      } else {
        break;
      }
      prev = next.cp;
    }
    emit(text.substr(start, pos - start));
  }
}

}  // namespace

TokenizerId tokenizer_from_string(std::string_view name) {
  if (name == "whitespace") return TokenizerId::kWhitespace;
  if (name == "char") return TokenizerId::kChar;
  throw UnknownTokenizer("unknown tokenizer '" + std::string(name) + "'");
}

std::string_view to_string(TokenizerId id) noexcept {
  return id == TokenizerId::kChar ? "char" : "whitespace";
}

std::vector<std::string> tokenize(std::string_view text, TokenizerId id) {
  std::vector<std::string> out;
  auto emit = [&](std::string_view tok) { out.emplace_back(tok); };
  if (id == TokenizerId::kChar) {
    split_graphemes(text, emit);
  } else {
    split_whitespace(text, emit);
  }
  return out;
}

std::size_t count_tokens(std::string_view text, TokenizerId id) {
  std::size_t n = 0;
  auto emit = [&](std::string_view) { ++n; };
  if (id == TokenizerId::kChar) {
    split_graphemes(text, emit);
  } else {
    split_whitespace(text, emit);
  }
  return n;
}

}  // namespace interleave
