#include "interleave/records.hpp"

#include "interleave/errors.hpp"

namespace interleave {
namespace {

template <typename T>
ordered_json optional_json(const std::optional<T>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

std::string required_string(const nlohmann::json& rec, const char* field, std::size_t line) {
  const auto it = rec.find(field);
  if (it == rec.end()) throw SchemaError(line, std::string("missing field \"") + field + "\"");
  if (!it->is_string()) throw SchemaError(line, std::string("field \"") + field + "\" must be a string");
  return it->get<std::string>();
}

}  // namespace

JsonlReader::JsonlReader(const std::filesystem::path& path) : in_(path) {
  if (!in_) throw IoError("cannot open " + path.string());
}

std::optional<JsonlReader::Line> JsonlReader::next() {
  std::string text;
  while (std::getline(in_, text)) {
    ++lineno_;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    return Line{lineno_, std::move(text)};
  }
  if (in_.bad()) throw IoError("read error at line " + std::to_string(lineno_ + 1));
  return std::nullopt;
}

Triple triple_from_line(const JsonlReader::Line& line) {
  const auto rec = nlohmann::json::parse(line.text, nullptr, false);
  if (rec.is_discarded() || !rec.is_object()) throw SchemaError(line.number, "not a JSON object");
  Triple t{required_string(rec, "id", line.number), required_string(rec, "prompt", line.number),
           required_string(rec, "reasoning", line.number), required_string(rec, "answer", line.number)};
  if (normalize_whitespace(t.reasoning).empty()) throw SchemaError(line.number, "reasoning is empty");
  if (normalize_whitespace(t.answer).empty()) throw SchemaError(line.number, "answer is empty");
  return t;
}

ordered_json to_json(const InterleavedSample& sample) {
  ordered_json segs = ordered_json::array();
  for (const auto& s : sample.sequence) {
    segs.push_back({{"channel", to_string(s.channel)}, {"text", s.text}});
  }
  return {{"id", sample.id},
          {"segments", std::move(segs)},
          {"boundaries", sample.boundaries.boundaries},
          {"oracle_mode", to_string(sample.oracle_mode)},
          {"cancelled_from", optional_json(sample.cancelled_from)}};
}

InterleavedSample sample_from_json(const nlohmann::json& rec, std::size_t line) {
  try {
    InterleavedSample s;
    s.id = rec.value("id", std::string{});
    for (const auto& seg : rec.at("segments")) {
      s.sequence.push_back({channel_from_string(seg.at("channel").get<std::string>()),
                            seg.at("text").get<std::string>()});
    }
    if (const auto b = rec.find("boundaries"); b != rec.end()) {
      s.boundaries.boundaries = b->get<std::vector<std::size_t>>();
      if (!s.boundaries.boundaries.empty()) s.boundaries.answer_count = s.boundaries.boundaries.back();
    }
    if (const auto m = rec.find("oracle_mode"); m != rec.end() && m->is_string()) {
      s.oracle_mode = oracle_mode_from_string(m->get<std::string>());
    }
    if (const auto c = rec.find("cancelled_from"); c != rec.end() && !c->is_null()) {
      s.cancelled_from = c->get<std::size_t>();
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(line, std::string("bad sample record: ") + e.what());
  } catch (const ConfigError& e) {
    throw SchemaError(line, e.what());
  }
}

ordered_json to_json(const MetricsReport& r) {
  return {{"id", r.id},
          {"ari", optional_json(r.ari)},
          {"abo", optional_json(r.abo)},
          {"airw", optional_json(r.airw)},
          {"total_tokens", r.lengths.total},
          {"think_tokens", r.lengths.think},
          {"speak_tokens", r.lengths.speak},
          {"k_star", r.k_star},
          {"g_onset", optional_json(r.g_onset)}};
}

ordered_json to_json(const MetricsAggregate& a) {
  return {{"aggregate", true},
          {"count", a.count()},
          {"skipped", a.skipped()},
          {"ari", optional_json(a.mean_ari())},
          {"abo", optional_json(a.mean_abo())},
          {"airw", optional_json(a.mean_airw())},
          {"total_tokens", optional_json(a.mean_total())},
          {"think_tokens", optional_json(a.mean_think())},
          {"speak_tokens", optional_json(a.mean_speak())},
          {"k_star", optional_json(a.mean_k_star())},
          {"g_onset", optional_json(a.mean_g_onset())}};
}

ordered_json to_json(const GroupResult& g) {
  return {{"group_id", g.group_id},
          {"kept", g.kept},
          {"labels", g.labels},
          {"rewards", g.rewards},
          {"shaped", g.shaped},
          {"advantages", g.advantages},
          {"max_block_lengths", g.max_block_lengths}};
}

}  // namespace interleave
