#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include <chrono>
#include <cstdlib>
#include <thread>

#include "bcplus/error.hpp"
#include "bcplus/pipeline.hpp"

namespace bcplus {

LiveClient::LiveClient(ClientSettings s, const std::atomic<bool>* cancel)
    : settings_(std::move(s)), cancel_(cancel) {
  const char* key = std::getenv(settings_.api_key_env.c_str());
  if (!key || !*key)
    throw Error(ErrorCode::ClientFailure, "environment variable " + settings_.api_key_env + " is not set");
  key_ = key;
}

std::string LiveClient::complete(const CompletionRequest& req) {
  nlohmann::json body = {{"model", settings_.model},
                         {"messages", {{{"role", "user"}, {"content", req.prompt}}}},
                         {"temperature", settings_.temperature},
                         {"max_completion_tokens", settings_.max_tokens}};
  httplib::SSLClient cli(settings_.host);
  cli.set_connection_timeout(settings_.timeout_seconds);
  cli.set_read_timeout(settings_.timeout_seconds);
  cli.set_write_timeout(settings_.timeout_seconds);
  httplib::Headers headers = {{"Authorization", "Bearer " + key_}};
  std::string last_error;
  for (int attempt = 0; attempt <= settings_.retries; ++attempt) {
    if (cancel_ && cancel_->load()) throw Error(ErrorCode::Cancelled, "request cancelled");
    if (attempt > 0) std::this_thread::sleep_for(std::chrono::seconds(1 << std::min(attempt, 5)));
    auto res = cli.Post(settings_.path, headers, body.dump(), "application/json");
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status == 429 || res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200)
      throw Error(ErrorCode::ClientFailure, "HTTP " + std::to_string(res->status) + ": " + res->body);
    try {
      auto j = nlohmann::json::parse(res->body);
      return j.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::ClientFailure, std::string("unexpected response: ") + e.what());
    }
  }
  throw Error(ErrorCode::ClientFailure, "request failed after retries: " + last_error);
}

}  // namespace bcplus
