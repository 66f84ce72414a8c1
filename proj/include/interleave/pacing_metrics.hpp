#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "interleave/tagged_stream.hpp"

namespace interleave {

// Content-latency statistics over a token stream. Positions are 1-indexed
// over the full think+speak sequence.

/// Mean position of all speak tokens. Throws NoSpeakTokens.
double ari(const TokenStream& stream);
/// Mean onset of maximal speak blocks. Throws NoSpeakTokens.
double abo(const TokenStream& stream);
/// Mean length of the non-empty think spans that precede a speak block,
/// the leading span included; the trailing span is ignored. 0 when there is
/// no such span. Throws NoSpeakTokens.
double airw(const TokenStream& stream);

struct LengthBreakdown {
  std::size_t total = 0;
  std::size_t think = 0;
  std::size_t speak = 0;

  friend bool operator==(const LengthBreakdown&, const LengthBreakdown&) = default;
};

LengthBreakdown length_breakdown(const TokenStream& stream);

/// First speak position, or size()+1 when nothing is ever disclosed.
std::size_t first_emission_index(const TokenStream& stream);

struct SubstantivePredicateConfig {
  std::vector<std::string> stoplist = {"okay", "sure", "let me", "one moment", "working on it", "i will"};
  std::string answer_pattern = R"(\d|\\boxed)";
  std::size_t min_content_tokens = 3;

  void validate() const;
};

/// Onset of the first speak block that, once stoplisted phrases are removed
/// (case-insensitively), matches answer_pattern or still holds at least
/// min_content_tokens word tokens.
std::optional<std::size_t> substantive_onset(const TokenStream& stream,
                                             const SubstantivePredicateConfig& cfg = {});

struct ObjectiveConfig {
  double lambda = 0.0;
  // Latency is normalized by total length; the only supported normalizer.

  void validate() const;
};

/// Returns 1 when the answer is judged correct against gold, else 0.
using AnswerChecker = std::function<int(std::string_view answer, std::string_view gold)>;

/// Task loss (1 - correctness of the disclosed text) plus lambda times the
/// normalized onset of the first substantive block (1 when there is none).
/// Throws NoSpeakTokens.
double objective(const Trajectory& traj, std::string_view gold, const AnswerChecker& checker,
                 const ObjectiveConfig& cfg, const SubstantivePredicateConfig& pred = {},
                 std::string_view delimiter = "\n\n");

struct MetricsReport {
  std::string id;
  std::optional<double> ari;
  std::optional<double> abo;
  std::optional<double> airw;
  LengthBreakdown lengths;
  std::size_t k_star = 1;
  std::optional<std::size_t> g_onset;
};

/// Every statistic in one pass; ari/abo/airw are empty without speak tokens.
MetricsReport compute_report(const TokenStream& stream, std::string id = {},
                             const SubstantivePredicateConfig& pred = {});

/// Running per-field means for the end-of-stream aggregate record.
class MetricsAggregate {
 public:
  void add(const MetricsReport& r);
  void add_skipped() { ++skipped_; }

  std::size_t count() const noexcept { return count_; }
  std::size_t skipped() const noexcept { return skipped_; }
  std::optional<double> mean_ari() const;
  std::optional<double> mean_abo() const;
  std::optional<double> mean_airw() const;
  std::optional<double> mean_total() const;
  std::optional<double> mean_think() const;
  std::optional<double> mean_speak() const;
  std::optional<double> mean_k_star() const;
  std::optional<double> mean_g_onset() const;

 private:
  struct Mean {
    double sum = 0;
    std::size_t n = 0;
    void add(double v) { sum += v, ++n; }
    std::optional<double> get() const { return n ? std::optional(sum / static_cast<double>(n)) : std::nullopt; }
  };
  std::size_t count_ = 0;
  std::size_t skipped_ = 0;
  Mean ari_, abo_, airw_, total_, think_, speak_, k_star_, g_onset_;
};

}  // namespace interleave
