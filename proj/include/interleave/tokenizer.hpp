#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace interleave {

/// Token-counting scheme. Metrics are reported in token indices, so every
/// trajectory records which scheme produced its positions.
enum class TokenizerId {
  kWhitespace,  // maximal runs of non-whitespace
  kChar,        // one token per (approximate) extended grapheme cluster
};

/// Accepts "whitespace" and "char"; throws UnknownTokenizer otherwise.
TokenizerId tokenizer_from_string(std::string_view name);
std::string_view to_string(TokenizerId id) noexcept;

std::vector<std::string> tokenize(std::string_view text, TokenizerId id);

/// Same as tokenize(text, id).size() without materializing the tokens.
std::size_t count_tokens(std::string_view text, TokenizerId id);

}  // namespace interleave
