#include "interleave/pacing_metrics.hpp"

#include <cctype>
#include <cmath>
#include <regex>

#include "interleave/errors.hpp"

namespace interleave {
namespace {

void require_speak(const std::vector<SpeakBlock>& blocks) {
  if (blocks.empty()) throw NoSpeakTokens("trajectory has no speak tokens");
}

std::string escape_regex(std::string_view s) {
  static const std::string kSpecial = R"(\^$.|?*+()[]{})";
  std::string out;
  for (char c : s) {
    if (kSpecial.find(c) != std::string::npos) out += '\\';
    out += c;
  }
  return out;
}

std::size_t content_tokens(const std::string& text) {
  std::size_t n = 0;
  for (const auto& tok : tokenize(text, TokenizerId::kWhitespace)) {
    for (unsigned char c : tok) {
      if (std::isalnum(c) || c >= 0x80) {
        ++n;
        break;
      }
    }
  }
  return n;
}

}  // namespace

double ari(const TokenStream& stream) {
  double sum = 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < stream.size(); ++i) {
    if (stream.channels[i] == Channel::kSpeak) {
      sum += static_cast<double>(i + 1);
      ++n;
    }
  }
  if (n == 0) throw NoSpeakTokens("trajectory has no speak tokens");
  return sum / static_cast<double>(n);
}

double abo(const TokenStream& stream) {
  const auto blocks = speak_blocks(stream);
  require_speak(blocks);
  double sum = 0;
  for (const auto& b : blocks) sum += static_cast<double>(b.onset);
  return sum / static_cast<double>(blocks.size());
}

double airw(const TokenStream& stream) {
  const auto blocks = speak_blocks(stream);
  require_speak(blocks);
  double sum = 0;
  std::size_t spans = 0;
  std::size_t prev_end = 1;  // first position after the previous block
  for (const auto& b : blocks) {
    const std::size_t wait = b.onset - prev_end;
    if (wait > 0) {
      sum += static_cast<double>(wait);
      ++spans;
    }
    prev_end = b.onset + b.length;
  }
  return spans == 0 ? 0.0 : sum / static_cast<double>(spans);
}

LengthBreakdown length_breakdown(const TokenStream& stream) {
  LengthBreakdown out;
  out.total = stream.size();
  for (auto c : stream.channels) (c == Channel::kThink ? out.think : out.speak)++;
  return out;
}

std::size_t first_emission_index(const TokenStream& stream) {
  for (std::size_t i = 0; i < stream.size(); ++i) {
    if (stream.channels[i] == Channel::kSpeak) return i + 1;
  }
  return stream.size() + 1;
}

void SubstantivePredicateConfig::validate() const {
  if (min_content_tokens < 1) throw ConfigError("min_content_tokens must be >= 1");
}

std::optional<std::size_t> substantive_onset(const TokenStream& stream,
                                             const SubstantivePredicateConfig& cfg) {
  cfg.validate();
  std::vector<std::regex> stop;
  stop.reserve(cfg.stoplist.size());
  for (const auto& phrase : cfg.stoplist) {
    stop.emplace_back("\\b" + escape_regex(phrase) + "\\b", std::regex::icase);
  }
  const std::regex answer(cfg.answer_pattern);

  for (const auto& b : speak_blocks(stream)) {
    std::string text;
    for (std::size_t i = b.onset - 1; i < b.onset - 1 + b.length; ++i) {
      if (i > b.onset - 1) text += stream.joiner;
      text += stream.tokens[i];
    }
    for (const auto& re : stop) text = std::regex_replace(text, re, " ");
    if (std::regex_search(text, answer) || content_tokens(text) >= cfg.min_content_tokens) {
      return b.onset;
    }
  }
  return std::nullopt;
}

void ObjectiveConfig::validate() const {
  if (!std::isfinite(lambda) || lambda < 0) throw ConfigError("lambda must be finite and >= 0");
}

double objective(const Trajectory& traj, std::string_view gold, const AnswerChecker& checker,
                 const ObjectiveConfig& cfg, const SubstantivePredicateConfig& pred,
                 std::string_view delimiter) {
  cfg.validate();
  const auto stream = TokenStream::from_trajectory(traj);
  const auto lengths = length_breakdown(stream);
  if (lengths.speak == 0) throw NoSpeakTokens("trajectory has no speak tokens");
  const double task = 1.0 - static_cast<double>(checker(project_channel(traj, Channel::kSpeak, delimiter), gold));
  const auto onset = substantive_onset(stream, pred);
  const double latency = onset ? static_cast<double>(*onset) / static_cast<double>(lengths.total) : 1.0;
  return task + cfg.lambda * latency;
}

MetricsReport compute_report(const TokenStream& stream, std::string id,
                             const SubstantivePredicateConfig& pred) {
  MetricsReport r;
  r.id = std::move(id);
  r.lengths = length_breakdown(stream);
  r.k_star = first_emission_index(stream);
  if (r.lengths.speak > 0) {
    r.ari = ari(stream);
    r.abo = abo(stream);
    r.airw = airw(stream);
  }
  r.g_onset = substantive_onset(stream, pred);
  return r;
}

void MetricsAggregate::add(const MetricsReport& r) {
  ++count_;
  if (r.ari) ari_.add(*r.ari);
  if (r.abo) abo_.add(*r.abo);
  if (r.airw) airw_.add(*r.airw);
  total_.add(static_cast<double>(r.lengths.total));
  think_.add(static_cast<double>(r.lengths.think));
  speak_.add(static_cast<double>(r.lengths.speak));
  k_star_.add(static_cast<double>(r.k_star));
  if (r.g_onset) g_onset_.add(static_cast<double>(*r.g_onset));
}

std::optional<double> MetricsAggregate::mean_ari() const { return ari_.get(); }
std::optional<double> MetricsAggregate::mean_abo() const { return abo_.get(); }
std::optional<double> MetricsAggregate::mean_airw() const { return airw_.get(); }
std::optional<double> MetricsAggregate::mean_total() const { return total_.get(); }
std::optional<double> MetricsAggregate::mean_think() const { return think_.get(); }
std::optional<double> MetricsAggregate::mean_speak() const { return speak_.get(); }
std::optional<double> MetricsAggregate::mean_k_star() const { return k_star_.get(); }
std::optional<double> MetricsAggregate::mean_g_onset() const { return g_onset_.get(); }

}  // namespace interleave
