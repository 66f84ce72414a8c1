#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include "interleave/remote_client.hpp"

#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "interleave/errors.hpp"

namespace interleave {
namespace {

constexpr std::string_view kChatRoute = "/chat/completions";

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

bool is_transient_status(int status) { return status == 408 || status == 429 || status >= 500; }

std::chrono::milliseconds retry_after(const httplib::Result& res, std::chrono::milliseconds cap) {
  if (!res || !res->has_header("Retry-After")) return std::chrono::milliseconds{-1};
  const auto value = res->get_header_value("Retry-After");
  char* end = nullptr;
  const double seconds = std::strtod(value.c_str(), &end);
  if (end == value.c_str() || seconds < 0) return std::chrono::milliseconds{-1};
  const auto ms = std::chrono::milliseconds(static_cast<long long>(seconds * 1000.0));
  return std::min(ms, cap);
}

}  // namespace

EndpointUrl EndpointUrl::parse(std::string_view url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string_view::npos) throw ConfigError("endpoint must include a scheme: " + std::string(url));
  const auto scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") throw ConfigError("unsupported endpoint scheme: " + std::string(scheme));
  const auto path_start = url.find('/', scheme_end + 3);
  EndpointUrl out;
  out.scheme_host_port = std::string(url.substr(0, path_start));
  std::string path = path_start == std::string_view::npos ? "" : std::string(url.substr(path_start));
  while (!path.empty() && path.back() == '/') path.pop_back();
  if (!ends_with(path, kChatRoute)) path += kChatRoute;
  out.path = std::move(path);
  return out;
}

std::chrono::milliseconds backoff_delay(int attempt, std::chrono::milliseconds base,
                                        std::chrono::milliseconds cap) {
  auto delay = base;
  for (int i = 0; i < attempt && delay < cap; ++i) delay *= 2;
  return std::min(delay, cap);
}

std::string query_remote(const std::string& prompt, const OracleConfig& cfg) {
  const auto url = EndpointUrl::parse(cfg.endpoint);

  httplib::Headers headers;
  if (!cfg.api_key_env.empty()) {
    const char* key = std::getenv(cfg.api_key_env.c_str());
    if (key == nullptr || *key == '\0') {
      throw AuthError("environment variable " + cfg.api_key_env + " is not set");
    }
    headers.emplace("Authorization", std::string("Bearer ") + key);
  }

  const nlohmann::json request = {
      {"model", cfg.model_name},
      {"messages", nlohmann::json::array({{{"role", "system"}, {"content", prompt}}})},
      {"temperature", 0},
  };
  const std::string body = request.dump();

  httplib::Client client(url.scheme_host_port);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(cfg.timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(cfg.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());

  std::string last_error = "no attempt made";
  bool last_timed_out = false;
  for (int attempt = 0; attempt <= cfg.max_retries; ++attempt) {
    auto res = client.Post(url.path, headers, body, "application/json");
    std::chrono::milliseconds hinted{-1};
    if (!res) {
      const auto err = res.error();
      last_timed_out = err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read;
      last_error = "transport error: " + httplib::to_string(err);
    } else if (res->status == 401 || res->status == 403) {
      throw AuthError("endpoint rejected credentials (HTTP " + std::to_string(res->status) + ")");
    } else if (res->status >= 200 && res->status < 300) {
      const auto parsed = nlohmann::json::parse(res->body, nullptr, false);
      try {
        return parsed.at("choices").at(0).at("message").at("content").get<std::string>();
      } catch (const nlohmann::json::exception&) {
        throw RemoteUnavailable("malformed chat-completions response body");
      }
    } else if (!is_transient_status(res->status)) {
      throw RemoteUnavailable("endpoint returned HTTP " + std::to_string(res->status));
    } else {
      last_timed_out = res->status == 408;
      last_error = "HTTP " + std::to_string(res->status);
      hinted = retry_after(res, cfg.backoff_cap);
    }
    if (attempt < cfg.max_retries) {
      std::this_thread::sleep_for(hinted.count() >= 0 ? hinted
                                                      : backoff_delay(attempt, cfg.backoff_base, cfg.backoff_cap));
    }
  }
  const std::string msg = "giving up after " + std::to_string(cfg.max_retries + 1) + " attempts: " + last_error;
  if (last_timed_out) throw Timeout(msg);
  throw RemoteUnavailable(msg);
}

RemoteOracle::RemoteOracle(OracleConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  EndpointUrl::parse(cfg_.endpoint);
}

std::string RemoteOracle::ask(const DeciderQuery& query) {
  return query_remote(render_decider_prompt(query.state), cfg_);
}

}  // namespace interleave
