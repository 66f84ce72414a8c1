#include "interleave/oracle.hpp"

#include <algorithm>
#include <random>

#include "interleave/errors.hpp"
#include "interleave/remote_client.hpp"
#include "interleave/replay_cache.hpp"

namespace interleave {
namespace {

std::string count_response(std::size_t n) { return "{\"num_blocks\": " + std::to_string(n) + "}"; }

// FNV-1a over the replay key; only feeds the mock's RNG.
std::uint64_t mix_seed(std::uint64_t seed, std::string_view key) {
  std::uint64_t h = 1469598103934665603ULL ^ seed;
  for (unsigned char c : key) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

std::string_view to_string(OracleKind k) noexcept {
  switch (k) {
    case OracleKind::kRemote: return "remote";
    case OracleKind::kReplay: return "replay";
    case OracleKind::kMock: break;
  }
  return "mock";
}

OracleKind oracle_kind_from_string(std::string_view s) {
  if (s == "remote") return OracleKind::kRemote;
  if (s == "mock") return OracleKind::kMock;
  if (s == "replay") return OracleKind::kReplay;
  throw ConfigError("unknown oracle '" + std::string(s) + "'");
}

void OracleConfig::validate() const {
  if (concurrency < 1) throw ConfigError("oracle concurrency must be >= 1");
  if (max_retries < 0) throw ConfigError("max_retries must be >= 0");
  if (kind == OracleKind::kRemote && (endpoint.empty() || model_name.empty())) {
    throw ConfigError("remote oracle requires an endpoint and a model name");
  }
}

BoundaryFn proportional_boundary() {
  return [](std::size_t k, std::size_t kr, std::size_t ka) { return kr == 0 ? ka : k * ka / kr; };
}

BoundaryFn lagged_boundary() {
  return [](std::size_t k, std::size_t, std::size_t ka) { return std::min(k == 0 ? 0 : k - 1, ka); };
}

MockOracle::MockOracle(BoundaryFn truth, MockNoise noise, std::uint64_t seed)
    : truth_(std::move(truth)), noise_(noise), seed_(seed) {}

std::string MockOracle::ask(const DeciderQuery& q) {
  const std::size_t remaining = q.state.remaining_blocks.size();
  const std::size_t supported = std::min(truth_(q.reasoning_prefix, q.reasoning_count, q.answer_count), q.answer_count);
  std::size_t n = supported > q.covered ? std::min(supported - q.covered, remaining) : 0;

  if (noise_.under > 0 || noise_.over > 0 || noise_.garbage > 0) {
    std::mt19937_64 rng(mix_seed(seed_, replay_key(q.state)));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double draw = unit(rng);
    if (draw < noise_.garbage) return "I am not sure about this one.";
    if (draw < noise_.garbage + noise_.under && n > 0) {
      n = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    } else if (draw < noise_.garbage + noise_.under + noise_.over) {
      n += std::uniform_int_distribution<std::size_t>(1, remaining + 2)(rng);
    }
  }
  return count_response(n);
}

std::string ReplayOracle::ask(const DeciderQuery& query) {
  const auto key = replay_key(query.state);
  if (auto hit = cache_.get(key)) return *hit;
  throw ReplayMiss("no recorded response for key " + key);
}

std::string RecordingOracle::ask(const DeciderQuery& query) {
  const auto key = replay_key(query.state);
  if (auto hit = cache_.get(key)) {
    ++hits_;
    return *hit;
  }
  ++misses_;
  auto response = inner_.ask(query);
  cache_.put(key, response);
  return response;
}

ThrottledOracle::ThrottledOracle(EntailmentOracle& inner, std::size_t limit)
    : inner_(inner), slots_(static_cast<std::ptrdiff_t>(std::max<std::size_t>(limit, 1))) {}

std::string ThrottledOracle::ask(const DeciderQuery& query) {
  slots_.acquire();
  struct Release {
    std::counting_semaphore<>& s;
    ~Release() { s.release(); }
  } release{slots_};
  return inner_.ask(query);
}

std::unique_ptr<EntailmentOracle> make_oracle(const OracleConfig& cfg, std::uint64_t seed,
                                              const ReplayCache* cache, MockNoise noise) {
  cfg.validate();
  switch (cfg.kind) {
    case OracleKind::kRemote:
      return std::make_unique<RemoteOracle>(cfg);
    case OracleKind::kReplay:
      if (cache == nullptr) throw ConfigError("replay oracle requires a replay cache");
      return std::make_unique<ReplayOracle>(*cache);
    case OracleKind::kMock:
      break;
  }
  return std::make_unique<MockOracle>(proportional_boundary(), noise, seed);
}

}  // namespace interleave
