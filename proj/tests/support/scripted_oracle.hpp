#pragma once

#include <atomic>
#include <chrono>
#include <cstddef>
#include <map>
#include <string>
#include <thread>

#include "interleave/errors.hpp"
#include "interleave/oracle.hpp"

namespace interleave::testing {

/// Replies with a fixed body per reasoning prefix k, optionally after a
/// per-k delay so completion order can be shuffled. Missing k -> "0".
class ScriptedOracle final : public EntailmentOracle {
 public:
  std::map<std::size_t, std::string> bodies;
  std::map<std::size_t, std::chrono::microseconds> delays;
  std::map<std::size_t, bool> fail;  // k -> throw RemoteUnavailable
  std::atomic<std::size_t> calls{0};

  static std::string count(std::size_t n) { return "{\"num_blocks\": " + std::to_string(n) + "}"; }

  std::string ask(const DeciderQuery& q) override {
    ++calls;
    if (auto d = delays.find(q.reasoning_prefix); d != delays.end()) std::this_thread::sleep_for(d->second);
    if (auto f = fail.find(q.reasoning_prefix); f != fail.end() && f->second) {
      throw RemoteUnavailable("scripted failure at k=" + std::to_string(q.reasoning_prefix));
    }
    if (auto b = bodies.find(q.reasoning_prefix); b != bodies.end()) return b->second;
    return count(0);
  }
};

}  // namespace interleave::testing
