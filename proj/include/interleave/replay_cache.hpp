#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>

namespace interleave {

/// Line-delimited {"key", "response"} store of decider answers. Later lines
/// win over earlier ones with the same key.
class ReplayCache {
 public:
  ReplayCache() = default;
  ReplayCache(ReplayCache&& other) noexcept
      : entries_(std::move(other.entries_)), writer_(std::move(other.writer_)) {}

  /// Loads `path` if it exists. Throws CacheCorrupt naming the bad line.
  static ReplayCache load(const std::filesystem::path& path);

  /// Appends every subsequent put() to `path` (created if missing).
  void attach_writer(const std::filesystem::path& path);

  std::optional<std::string> get(const std::string& key) const;
  void put(const std::string& key, const std::string& response);

  std::size_t size() const;

 private:
  mutable std::mutex mu_;
  std::unordered_map<std::string, std::string> entries_;
  std::ofstream writer_;
};

}  // namespace interleave
