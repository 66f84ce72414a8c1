#pragma once

#include <chrono>
#include <string>
#include <string_view>

#include "interleave/oracle.hpp"

namespace interleave {

/// Scheme/host/port/path split of an endpoint URL. A bare base URL gets
/// "/chat/completions" appended.
struct EndpointUrl {
  std::string scheme_host_port;  // e.g. "https://api.example.com:443"
  std::string path;              // e.g. "/v1/chat/completions"

  static EndpointUrl parse(std::string_view url);
};

/// Delay before retry number `attempt` (0-based): base * 2^attempt, capped.
std::chrono::milliseconds backoff_delay(int attempt, std::chrono::milliseconds base,
                                        std::chrono::milliseconds cap);

/// Sends one chat-completions request with temperature 0 and returns
/// choices[0].message.content. Retries 429, 5xx and transport failures with
/// exponential backoff (honouring Retry-After), up to cfg.max_retries.
/// Throws AuthError on 401/403 or a missing credential, Timeout when the
/// last attempt timed out, RemoteUnavailable otherwise.
std::string query_remote(const std::string& prompt, const OracleConfig& cfg);

class RemoteOracle final : public EntailmentOracle {
 public:
  explicit RemoteOracle(OracleConfig cfg);
  std::string ask(const DeciderQuery& query) override;

 private:
  OracleConfig cfg_;
};

}  // namespace interleave
