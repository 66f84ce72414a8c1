#include "interleave/decider.hpp"

#include <array>
#include <cmath>
#include <cstdio>

#include <nlohmann/json.hpp>
#include <openssl/sha.h>

#include "interleave/errors.hpp"

namespace interleave {
namespace {

constexpr std::string_view kHeader = "You are a **Response Coverage Decider**.\n";

constexpr std::string_view kInstructions = R"(---
**What the inputs are**
* **Processed Thoughts**: reasoning blocks already incorporated.
* **Covered Responses**: response blocks confirmed as supported.
* **Current Thought**: next reasoning block for coverage.
* **Remaining Response Blocks**: not yet covered, as `"[BLOCK i] <text>"` with 0-based `i`.
---
**Task**
Determine how many **Remaining Response Blocks** can move into **Covered Responses**, using **only**: **Processed + Current Thought** and applying **no-new-derivation entailment**:
**Entailment rule (NO-NEW-DERIVATION)**
A block is **addable** iff its content is established by thoughts and included **without additional reasoning**.
**Allowed "zero-derivation" (OK):**
* Paraphrase/synonym (exact meaning); Reformatting (punctuation/grammar); Definitional substitution; Notation normalization (if result exists); Adding implicit background knowledge; Dropping dead ends.
**Not allowed (NOT addable):**
* New inference steps; Combining facts into new claims; Generalizing/dropping caveats; New computation; Applying theorems implicitly.
**Conservative rule:** If unsure, treat as **NOT addable**.
---
**Contiguity constraint**
Only add a **prefix**: Add `k` blocks (0..k-1). Stop at the **first** non-addable block; do not skip.
---
**Output** (Return **ONLY** JSON):
```json
{ "num_blocks": k }
```
Where:
* `k` is the number of addable blocks from the start of Remaining Response Blocks.
* `k = 0` means add none.
* `k = 1` means add block 0 only.
* In general, add blocks `0..k-1`.
* `0 <= k <= M` (M = number of remaining blocks).
**Return JSON only. No extra keys.**
)";

// Index one past the '}' matching the '{' at `open`, or npos.
std::size_t match_brace(std::string_view s, std::size_t open) {
  int depth = 0;
  bool in_string = false;
  for (std::size_t i = open; i < s.size(); ++i) {
    const char c = s[i];
    if (in_string) {
      if (c == '\\') ++i;
      else if (c == '"') in_string = false;
      continue;
    }
    if (c == '"') in_string = true;
    else if (c == '{') ++depth;
    else if (c == '}' && --depth == 0) return i + 1;
  }
  return std::string_view::npos;
}

void append_field(std::string& buf, std::string_view field) {
  buf += std::to_string(field.size());
  buf += ':';
  buf += field;
}

}  // namespace

std::string render_decider_prompt(const DeciderState& state) {
  std::string remaining;
  for (std::size_t i = 0; i < state.remaining_blocks.size(); ++i) {
    if (i > 0) remaining += '\n';
    remaining += "[BLOCK " + std::to_string(i) + "] " + state.remaining_blocks[i];
  }

  std::string out(kHeader);
  out += "**Problem:** " + state.problem + "\n";
  out += "**History:**\n";
  out += "**Processed Thoughts:** " + state.processed_thoughts + "\n";
  out += "**Covered Responses:** " + state.covered_responses + "\n";
  out += "**Current**\n";
  out += "**Current Thought:** " + state.current_thought + "\n";
  out += "**Remaining Response Blocks:**\n" + remaining + "\n";
  out += kInstructions;
  return out;
}

std::size_t parse_decider_response(std::string_view body, std::size_t remaining) {
  for (auto open = body.find('{'); open != std::string_view::npos; open = body.find('{', open + 1)) {
    const auto close = match_brace(body, open);
    if (close == std::string_view::npos) continue;
    const auto obj = nlohmann::json::parse(body.substr(open, close - open), nullptr, false);
    if (!obj.is_object()) continue;
    const auto it = obj.find("num_blocks");
    if (it == obj.end() || !it->is_number()) continue;
    const double v = it->get<double>();
    if (!std::isfinite(v)) continue;
    if (v <= 0) return 0;
    return std::min(static_cast<std::size_t>(std::floor(v)), remaining);
  }
  throw Unparseable("no JSON object with num_blocks in decider response");
}

std::string replay_key(const DeciderState& state) {
  std::string buf;
  append_field(buf, kDeciderTemplateVersion);
  append_field(buf, state.problem);
  append_field(buf, state.processed_thoughts);
  append_field(buf, state.covered_responses);
  append_field(buf, state.current_thought);
  for (const auto& b : state.remaining_blocks) append_field(buf, b);

  std::array<unsigned char, SHA256_DIGEST_LENGTH> digest{};
  SHA256(reinterpret_cast<const unsigned char*>(buf.data()), buf.size(), digest.data());
  std::string hex;
  hex.reserve(digest.size() * 2);
  char tmp[3];
  for (unsigned char b : digest) {
    std::snprintf(tmp, sizeof tmp, "%02x", b);
    hex += tmp;
  }
  return hex;
}

}  // namespace interleave
