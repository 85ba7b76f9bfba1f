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

// Chat-completion backends. A backend turns a ChatRequest into response text;
// the live HTTP client lives in http_backend.h, and this header provides the
// cassette wrappers that make runs reproducible:
//
//   RecordingBackend  forwards to a live backend and appends every exchange
//                     to a JSONL cassette.
//   ReplayBackend     serves responses from a cassette and never touches the
//                     network.

#ifndef STAR_FORGE_CORE_BACKEND_H_
#define STAR_FORGE_CORE_BACKEND_H_

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "json.hpp"

namespace starforge {

struct ChatMessage {
  std::string role;  // system | user | assistant
  std::string content;

  bool operator==(const ChatMessage &) const = default;
};

struct ChatRequest {
  std::string model_id;
  std::vector<ChatMessage> messages;
  double temperature = 0.0;
  int max_tokens = 1024;

  // Wire body: {model, messages:[{role, content}], temperature, max_tokens}.
  nlohmann::json ToJson() const;
  static ChatRequest FromJson(const nlohmann::json &j);

  // SHA-256 over the canonical (key-sorted) serialization of all fields.
  std::string Hash() const;

  // Throws Error(kInvalidArgument) on an invalid request.
  void Validate() const;
};

struct ChatResponse {
  std::string text;
  std::string response_id;
};

// Stable identifier of a response body.
std::string ResponseIdFor(const std::string &text);

class ChatBackend {
 public:
  virtual ~ChatBackend() = default;
  virtual ChatResponse Complete(const ChatRequest &request) = 0;
};

// Model parameters shared by all pipeline stages that talk to a backend.
struct ModelSettings {
  std::string model_id = "gpt-3.5-turbo";
  int max_tokens = 1024;
  double generation_temperature = 0.8;
  double judge_temperature = 0.0;

  ChatRequest Generation(std::vector<ChatMessage> messages) const;
  ChatRequest Judgment(std::vector<ChatMessage> messages) const;
};

struct CassetteEntry {
  std::string request_hash;
  nlohmann::json request;
  std::string response;
  std::string recorded_at;
};

// In-memory cassette. Several entries may share a request hash (the same
// prompt asked repeatedly); they are served in recorded order and the last one
// keeps being served once the sequence is exhausted.
class Cassette {
 public:
  static Cassette Load(const std::string &path);

  bool Contains(const std::string &hash) const;
  size_t size() const { return size_; }

  // Latest recorded_at across all entries, or empty.
  const std::string &latest_recorded_at() const { return latest_; }

  // Next response for `hash`; throws Error(kCassetteMiss) naming the hash.
  const std::string &Next(const std::string &hash);

  void Add(CassetteEntry entry);

 private:
  struct Slot {
    std::vector<std::string> responses;
    size_t cursor = 0;
  };
  std::map<std::string, Slot> slots_;
  std::string latest_;
  size_t size_ = 0;
};

class ReplayBackend : public ChatBackend {
 public:
  explicit ReplayBackend(Cassette cassette) : cassette_(std::move(cassette)) {}
  static std::unique_ptr<ReplayBackend> FromFile(const std::string &path);

  ChatResponse Complete(const ChatRequest &request) override;

  const Cassette &cassette() const { return cassette_; }

 private:
  std::mutex mu_;
  Cassette cassette_;
};

class RecordingBackend : public ChatBackend {
 public:
  using Clock = std::function<std::chrono::system_clock::time_point()>;

  // Appends to `cassette_path`, creating it if needed.
  RecordingBackend(std::shared_ptr<ChatBackend> live, std::string cassette_path,
                   Clock clock = nullptr);

  ChatResponse Complete(const ChatRequest &request) override;

 private:
  std::shared_ptr<ChatBackend> live_;
  std::string path_;
  Clock clock_;
  std::mutex mu_;
};

// Serializes one cassette line.
std::string CassetteLine(const CassetteEntry &entry);

}  // namespace starforge

#endif  // STAR_FORGE_CORE_BACKEND_H_
