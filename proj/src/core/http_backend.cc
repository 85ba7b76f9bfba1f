// Copyright 2026 The Star Forge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "core/http_backend.h"

#include <cmath>
#include <cstdlib>
#include <thread>

#include "core/error.h"
#include "httplib.h"

namespace starforge {

using json = nlohmann::json;

BackendMode ParseBackendMode(const std::string &name) {
  if (name == "live") return BackendMode::kLive;
  if (name == "record") return BackendMode::kRecord;
  if (name == "replay") return BackendMode::kReplay;
  Fail(ErrorCode::kConfig, "unknown backend mode '" + name + "'");
}

std::string BackendModeName(BackendMode mode) {
  switch (mode) {
    case BackendMode::kLive: return "live";
    case BackendMode::kRecord: return "record";
    case BackendMode::kReplay: return "replay";
  }
  return "live";
}

std::chrono::milliseconds RetryPolicy::DelayAfter(int attempt) const {
  double ms = base_backoff_ms * std::pow(multiplier, attempt - 1);
  return std::chrono::milliseconds(static_cast<int64_t>(std::ceil(ms)));
}

void BackendConfig::Validate() const {
  if (requests_per_second <= 0) {
    Fail(ErrorCode::kConfig, "backend.requests_per_second must be positive");
  }
  if (retry.max_attempts <= 0) {
    Fail(ErrorCode::kConfig, "backend.retry.max_attempts must be positive");
  }
  if (retry.base_backoff_ms < 0 || retry.multiplier < 1.0) {
    Fail(ErrorCode::kConfig,
         "backend.retry needs base_backoff_ms >= 0 and multiplier >= 1");
  }
  if (timeout_ms <= 0) {
    Fail(ErrorCode::kConfig, "backend.timeout_ms must be positive");
  }
  if (mode != BackendMode::kLive && cassette_path.empty()) {
    Fail(ErrorCode::kConfig, "backend mode '" + BackendModeName(mode) +
                                 "' requires a cassette_path");
  }
}

BackendConfig BackendConfig::FromJson(const json &j) {
  BackendConfig c;
  try {
    c.endpoint_url = j.value("endpoint_url", c.endpoint_url);
    c.auth_token_env_var = j.value("auth_token_env_var", c.auth_token_env_var);
    c.requests_per_second = j.value("requests_per_second", c.requests_per_second);
    c.timeout_ms = j.value("timeout_ms", c.timeout_ms);
    if (j.contains("retry")) {
      const json &r = j.at("retry");
      c.retry.max_attempts = r.value("max_attempts", c.retry.max_attempts);
      c.retry.base_backoff_ms = r.value("base_backoff_ms", c.retry.base_backoff_ms);
      c.retry.multiplier = r.value("multiplier", c.retry.multiplier);
    }
    c.mode = ParseBackendMode(j.value("mode", std::string("live")));
    c.cassette_path = j.value("cassette_path", std::string());
  } catch (const json::exception &e) {
    Fail(ErrorCode::kConfig, std::string("backend config: ") + e.what());
  }
  return c;
}

json BackendConfig::ToJson() const {
  return {{"endpoint_url", endpoint_url},
          {"auth_token_env_var", auth_token_env_var},
          {"requests_per_second", requests_per_second},
          {"timeout_ms", timeout_ms},
          {"retry",
           {{"max_attempts", retry.max_attempts},
            {"base_backoff_ms", retry.base_backoff_ms},
            {"multiplier", retry.multiplier}}},
          {"mode", BackendModeName(mode)},
          {"cassette_path", cassette_path}};
}

RateLimiter::RateLimiter(int per_second) : per_second_(per_second) {
  if (per_second_ <= 0) {
    Fail(ErrorCode::kConfig, "rate limit must be positive");
  }
}

RateLimiter::Clock::time_point RateLimiter::Acquire() {
  std::unique_lock<std::mutex> lock(mu_);
  // Holding the lock while sleeping serializes waiters in arrival order.
  for (;;) {
    const auto now = Clock::now();
    while (!granted_.empty() && now - granted_.front() >= std::chrono::seconds(1)) {
      granted_.pop_front();
    }
    if (static_cast<int>(granted_.size()) < per_second_) {
      granted_.push_back(now);
      return now;
    }
    std::this_thread::sleep_until(granted_.front() + std::chrono::seconds(1));
  }
}

std::pair<std::string, std::string> SplitUrl(const std::string &url) {
  size_t scheme_end = url.find("://");
  size_t host_start = scheme_end == std::string::npos ? 0 : scheme_end + 3;
  size_t path_start = url.find('/', host_start);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

namespace {

std::string TokenFromEnv(const BackendConfig &config) {
  const char *value = std::getenv(config.auth_token_env_var.c_str());
  if (value == nullptr || *value == '\0') {
    Fail(ErrorCode::kConfig, "environment variable " +
                                 config.auth_token_env_var +
                                 " is not set (needed for live backend mode)");
  }
  return value;
}

}  // namespace

HttpChatBackend::HttpChatBackend(BackendConfig config, Hooks hooks)
    : HttpChatBackend(config, TokenFromEnv(config), std::move(hooks)) {}

HttpChatBackend::HttpChatBackend(BackendConfig config, std::string auth_token,
                                 Hooks hooks)
    : config_(std::move(config)), token_(std::move(auth_token)),
      hooks_(std::move(hooks)), limiter_(config_.requests_per_second) {
  std::tie(base_, path_) = SplitUrl(config_.endpoint_url);
}

ChatResponse HttpChatBackend::Complete(const ChatRequest &request) {
  request.Validate();
  httplib::Client client(base_);
  const auto timeout = std::chrono::milliseconds(config_.timeout_ms);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);
  const httplib::Headers headers = {{"Authorization", "Bearer " + token_}};
  const std::string body = request.ToJson().dump();

  std::string last_failure;
  bool last_was_status = false;
  for (int attempt = 1; attempt <= config_.retry.max_attempts; ++attempt) {
    const auto issued = limiter_.Acquire();
    if (hooks_.on_attempt) hooks_.on_attempt(issued);
    auto result = client.Post(path_, headers, body, "application/json");
    std::chrono::milliseconds retry_after{0};
    if (!result) {
      last_failure = "transport failure: " + httplib::to_string(result.error());
      last_was_status = false;
    } else {
      const int status = result->status;
      if (status >= 200 && status < 300) {
        try {
          json j = json::parse(result->body);
          std::string text = j.at("choices").at(0).at("message").at("content")
                                 .get<std::string>();
          return {text, ResponseIdFor(text)};
        } catch (const json::exception &e) {
          Fail(ErrorCode::kBackend,
               std::string("malformed completion response: ") + e.what());
        }
      }
      if (status == 401 || status == 403) {
        Fail(ErrorCode::kAuth, "backend rejected credentials (HTTP " +
                                   std::to_string(status) + ")");
      }
      if (status != 429 && status < 500) {
        Fail(ErrorCode::kBackend, "backend returned HTTP " +
                                      std::to_string(status) + ": " +
                                      result->body.substr(0, 200));
      }
      last_failure = "HTTP " + std::to_string(status);
      last_was_status = true;
      if (result->has_header("Retry-After")) {
        try {
          retry_after = std::chrono::seconds(
              std::stoi(result->get_header_value("Retry-After")));
        } catch (const std::exception &) {
        }
      }
    }
    if (attempt < config_.retry.max_attempts) {
      std::this_thread::sleep_for(
          std::max(config_.retry.DelayAfter(attempt), retry_after));
    }
  }
  const std::string message = "gave up after " +
                              std::to_string(config_.retry.max_attempts) +
                              " attempts, last: " + last_failure;
  Fail(last_was_status ? ErrorCode::kRateLimitExhausted : ErrorCode::kTransport,
       message);
}

std::shared_ptr<ChatBackend> MakeBackend(const BackendConfig &config) {
  config.Validate();
  switch (config.mode) {
    case BackendMode::kReplay:
      return ReplayBackend::FromFile(config.cassette_path);
    case BackendMode::kRecord:
      return std::make_shared<RecordingBackend>(
          std::make_shared<HttpChatBackend>(config), config.cassette_path);
    case BackendMode::kLive:
      break;
  }
  return std::make_shared<HttpChatBackend>(config);
}

}  // namespace starforge
