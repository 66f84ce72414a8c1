#pragma once

#include <cstddef>
#include <string_view>

namespace interleave::utf8 {

struct Decoded {
  char32_t cp;
  std::size_t len;  // bytes consumed, always >= 1
};

/// Decodes one code point at `pos`. Invalid sequences decode as U+FFFD
/// consuming a single byte, so iteration always makes progress.
Decoded decode(std::string_view s, std::size_t pos) noexcept;

bool is_space(char32_t cp) noexcept;

/// Code points that never start a grapheme cluster: combining marks,
/// variation selectors, emoji modifiers, spacing marks in common scripts.
bool is_extend(char32_t cp) noexcept;

bool is_regional_indicator(char32_t cp) noexcept;

constexpr char32_t kZeroWidthJoiner = 0x200D;

}  // namespace interleave::utf8
