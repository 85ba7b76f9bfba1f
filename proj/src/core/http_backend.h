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

#ifndef STAR_FORGE_CORE_HTTP_BACKEND_H_
#define STAR_FORGE_CORE_HTTP_BACKEND_H_

#include <chrono>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <string>

#include "core/backend.h"
#include "json.hpp"

namespace starforge {

enum class BackendMode { kLive, kRecord, kReplay };

BackendMode ParseBackendMode(const std::string &name);
std::string BackendModeName(BackendMode mode);

struct RetryPolicy {
  int max_attempts = 5;
  int base_backoff_ms = 500;
  double multiplier = 2.0;

  // Delay before attempt `attempt` + 1, for attempt >= 1.
  std::chrono::milliseconds DelayAfter(int attempt) const;
};

struct BackendConfig {
  std::string endpoint_url = "https://api.openai.com/v1/chat/completions";
  std::string auth_token_env_var = "OPENAI_API_KEY";
  int requests_per_second = 5;
  RetryPolicy retry;
  BackendMode mode = BackendMode::kLive;
  std::string cassette_path;
  int timeout_ms = 60000;

  // Throws Error(kConfig).
  void Validate() const;

  static BackendConfig FromJson(const nlohmann::json &j);
  nlohmann::json ToJson() const;
};

// Sliding-window limiter: at most `per_second` acquisitions in any half-open
// one-second window.
class RateLimiter {
 public:
  using Clock = std::chrono::steady_clock;

  explicit RateLimiter(int per_second);

  // Blocks until a slot is available; returns the instant it was granted.
  Clock::time_point Acquire();

 private:
  const int per_second_;
  std::mutex mu_;
  std::deque<Clock::time_point> granted_;
};

// OpenAI-style chat completions over HTTP(S).
class HttpChatBackend : public ChatBackend {
 public:
  struct Hooks {
    // Called with the instant each HTTP attempt is issued.
    std::function<void(RateLimiter::Clock::time_point)> on_attempt;
  };

  // Reads the auth token from the configured environment variable; throws
  // Error(kConfig) naming the variable when it is unset.
  explicit HttpChatBackend(BackendConfig config, Hooks hooks = {});
  HttpChatBackend(BackendConfig config, std::string auth_token, Hooks hooks);

  ChatResponse Complete(const ChatRequest &request) override;

 private:
  BackendConfig config_;
  std::string token_;
  Hooks hooks_;
  RateLimiter limiter_;
  std::string base_;  // scheme://host[:port]
  std::string path_;
};

// Splits "http://host:port/path" into ("http://host:port", "/path").
std::pair<std::string, std::string> SplitUrl(const std::string &url);

// Builds the backend for `config.mode`: a live client, a recording wrapper
// around one, or a cassette replayer.
std::shared_ptr<ChatBackend> MakeBackend(const BackendConfig &config);

}  // namespace starforge

#endif  // STAR_FORGE_CORE_HTTP_BACKEND_H_
