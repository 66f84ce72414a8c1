#include "interleave/replay_cache.hpp"

#include <nlohmann/json.hpp>

#include "interleave/errors.hpp"

namespace interleave {

ReplayCache ReplayCache::load(const std::filesystem::path& path) {
  ReplayCache cache;
  if (!std::filesystem::exists(path)) return cache;
  std::ifstream in(path);
  if (!in) throw IoError("cannot open replay cache " + path.string());
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto rec = nlohmann::json::parse(line, nullptr, false);
    if (rec.is_discarded() || !rec.is_object()) throw CacheCorrupt(lineno, "not a JSON object");
    const auto key = rec.find("key");
    const auto response = rec.find("response");
    if (key == rec.end() || !key->is_string() || response == rec.end() || !response->is_string()) {
      throw CacheCorrupt(lineno, "expected string fields \"key\" and \"response\"");
    }
    cache.entries_[key->get<std::string>()] = response->get<std::string>();
  }
  return cache;
}

void ReplayCache::attach_writer(const std::filesystem::path& path) {
  std::lock_guard lock(mu_);
  writer_.open(path, std::ios::app);
  if (!writer_) throw IoError("cannot open replay cache for append: " + path.string());
}

std::optional<std::string> ReplayCache::get(const std::string& key) const {
  std::lock_guard lock(mu_);
  const auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void ReplayCache::put(const std::string& key, const std::string& response) {
  std::lock_guard lock(mu_);
  entries_[key] = response;
  if (writer_.is_open()) {
    writer_ << nlohmann::json{{"key", key}, {"response", response}}.dump() << '\n';
    writer_.flush();
    if (!writer_) throw IoError("failed writing replay cache");
  }
}

std::size_t ReplayCache::size() const {
  std::lock_guard lock(mu_);
  return entries_.size();
}

}  // namespace interleave
