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

#include "core/backend.h"

#include <fstream>

#include "core/digest.h"
#include "core/error.h"
#include "core/io.h"

namespace starforge {

using json = nlohmann::json;

json ChatRequest::ToJson() const {
  json msgs = json::array();
  for (const auto &m : messages) {
    msgs.push_back({{"role", m.role}, {"content", m.content}});
  }
  return {{"model", model_id},
          {"messages", std::move(msgs)},
          {"temperature", temperature},
          {"max_tokens", max_tokens}};
}

ChatRequest ChatRequest::FromJson(const json &j) {
  ChatRequest r;
  try {
    r.model_id = j.at("model").get<std::string>();
    for (const auto &m : j.at("messages")) {
      r.messages.push_back(
          {m.at("role").get<std::string>(), m.at("content").get<std::string>()});
    }
    r.temperature = j.at("temperature").get<double>();
    r.max_tokens = j.at("max_tokens").get<int>();
  } catch (const json::exception &e) {
    Fail(ErrorCode::kParse, std::string("chat request: ") + e.what());
  }
  return r;
}

std::string ChatRequest::Hash() const {
  // nlohmann::json keeps object keys sorted, so dump() is canonical.
  return Sha256Hex(ToJson().dump());
}

void ChatRequest::Validate() const {
  if (messages.empty()) {
    Fail(ErrorCode::kInvalidArgument, "chat request has no messages");
  }
  for (const auto &m : messages) {
    if (m.role != "system" && m.role != "user" && m.role != "assistant") {
      Fail(ErrorCode::kInvalidArgument, "invalid message role '" + m.role + "'");
    }
  }
  if (!(temperature >= 0.0)) {
    Fail(ErrorCode::kInvalidArgument, "temperature must be >= 0");
  }
  if (max_tokens <= 0) {
    Fail(ErrorCode::kInvalidArgument, "max_tokens must be positive");
  }
}

std::string ResponseIdFor(const std::string &text) {
  return Sha256Hex(text).substr(0, 16);
}

ChatRequest ModelSettings::Generation(std::vector<ChatMessage> messages) const {
  return {model_id, std::move(messages), generation_temperature, max_tokens};
}

ChatRequest ModelSettings::Judgment(std::vector<ChatMessage> messages) const {
  return {model_id, std::move(messages), judge_temperature, max_tokens};
}

Cassette Cassette::Load(const std::string &path) {
  Cassette c;
  size_t line_no = 0;
  for (const std::string &line : ReadNonEmptyLines(path)) {
    ++line_no;
    try {
      json j = json::parse(line);
      CassetteEntry e;
      e.request_hash = j.at("request_hash").get<std::string>();
      e.request = j.value("request", json::object());
      e.response = j.at("response").get<std::string>();
      e.recorded_at = j.value("recorded_at", "");
      c.Add(std::move(e));
    } catch (const json::exception &e) {
      Fail(ErrorCode::kParse, path + ":" + std::to_string(line_no) + ": " +
                                  e.what());
    }
  }
  return c;
}

bool Cassette::Contains(const std::string &hash) const {
  return slots_.count(hash) > 0;
}

const std::string &Cassette::Next(const std::string &hash) {
  auto it = slots_.find(hash);
  if (it == slots_.end()) {
    Fail(ErrorCode::kCassetteMiss, "no cassette entry for request " + hash);
  }
  Slot &slot = it->second;
  const std::string &out = slot.responses[slot.cursor];
  if (slot.cursor + 1 < slot.responses.size()) ++slot.cursor;
  return out;
}

void Cassette::Add(CassetteEntry entry) {
  if (entry.recorded_at > latest_) latest_ = entry.recorded_at;
  slots_[entry.request_hash].responses.push_back(std::move(entry.response));
  ++size_;
}

std::unique_ptr<ReplayBackend> ReplayBackend::FromFile(const std::string &path) {
  return std::make_unique<ReplayBackend>(Cassette::Load(path));
}

ChatResponse ReplayBackend::Complete(const ChatRequest &request) {
  request.Validate();
  const std::string hash = request.Hash();
  std::lock_guard<std::mutex> lock(mu_);
  const std::string &text = cassette_.Next(hash);
  return {text, ResponseIdFor(text)};
}

std::string CassetteLine(const CassetteEntry &entry) {
  json j = {{"request_hash", entry.request_hash},
            {"request", entry.request},
            {"response", entry.response},
            {"recorded_at", entry.recorded_at}};
  return j.dump();
}

RecordingBackend::RecordingBackend(std::shared_ptr<ChatBackend> live,
                                   std::string cassette_path, Clock clock)
    : live_(std::move(live)), path_(std::move(cassette_path)),
      clock_(clock ? std::move(clock) : Clock(std::chrono::system_clock::now)) {}

ChatResponse RecordingBackend::Complete(const ChatRequest &request) {
  request.Validate();
  ChatResponse response = live_->Complete(request);
  CassetteEntry entry{request.Hash(), request.ToJson(), response.text,
                      FormatRfc3339(clock_())};
  std::lock_guard<std::mutex> lock(mu_);
  std::ofstream out(path_, std::ios::app | std::ios::binary);
  if (!out) Fail(ErrorCode::kIo, "cannot append to cassette '" + path_ + "'");
  out << CassetteLine(entry) << '\n';
  return response;
}

}  // namespace starforge
