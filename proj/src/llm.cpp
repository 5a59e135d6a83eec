#include "sqlaudit/llm.hpp"

#include <sodium.h>

#include <cctype>
#include <chrono>
#include <fstream>
#include <thread>

#include <json.hpp>

namespace sqlaudit {

using nlohmann::json;

std::string_view role_name(Role role) {
  switch (role) {
    case Role::User: return "user";
    case Role::Assistant: return "assistant";
    case Role::System: return "system";
  }
  return "user";
}

std::string canonical_request_json(const std::vector<Message>& messages,
                                   const ModelParams& params) {
  json j;
  j["model"] = params.model;
  j["temperature"] = params.temperature;
  j["messages"] = json::array();
  for (const auto& m : messages) {
    j["messages"].push_back(
        {{"role", std::string(role_name(m.role))}, {"content", m.content}});
  }
  return j.dump();
}

std::string request_hash(const std::vector<Message>& messages,
                         const ModelParams& params) {
  if (sodium_init() < 0) throw std::runtime_error("libsodium init failed");
  std::string payload = canonical_request_json(messages, params);
  unsigned char digest[32];
  crypto_generichash(digest, sizeof digest,
                     reinterpret_cast<const unsigned char*>(payload.data()),
                     payload.size(), nullptr, 0);
  char hex[sizeof digest * 2 + 1];
  sodium_bin2hex(hex, sizeof hex, digest, sizeof digest);
  return hex;
}

TranscriptStore TranscriptStore::load(const std::string& path) {
  TranscriptStore store;
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open transcript store: " + path);
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.contains("hash") || !j.contains("response"))
      throw std::runtime_error("malformed transcript record at " + path + ":" +
                               std::to_string(lineno));
    std::string hash = j["hash"].get<std::string>();
    auto [it, inserted] =
        store.records_.emplace(hash, j["response"].get<std::string>());
    if (!inserted && it->second != j["response"].get<std::string>())
      throw std::runtime_error("conflicting responses for hash " + hash);
    if (j.contains("request"))
      store.requests_.push_back(j["request"].get<std::string>());
  }
  return store;
}

void TranscriptStore::open_for_append(const std::string& path) {
  append_path_ = path;
}

std::optional<std::string> TranscriptStore::lookup(
    const std::string& hash) const {
  auto it = records_.find(hash);
  if (it == records_.end()) return std::nullopt;
  return it->second;
}

void TranscriptStore::append(const std::string& hash,
                             const std::string& request_json,
                             const std::string& response) {
  std::lock_guard<std::mutex> lock(mutex_);
  auto [it, inserted] = records_.emplace(hash, response);
  if (!inserted) return;  // idempotent re-record
  requests_.push_back(request_json);
  if (!append_path_.empty()) {
    json j = {{"hash", hash}, {"request", request_json}, {"response", response}};
    std::ofstream out(append_path_, std::ios::app);
    if (!out)
      throw std::runtime_error("cannot append to transcript store: " +
                               append_path_);
    out << j.dump() << "\n";
  }
}

std::string ReplayTransport::send(const std::vector<Message>& messages,
                                  const ModelParams& params) {
  std::string hash = request_hash(messages, params);
  auto hit = store_->lookup(hash);
  if (!hit)
    throw TransportError("replay miss: no transcript for request hash " +
                         hash);
  return *hit;
}

std::string RecordTransport::send(const std::vector<Message>& messages,
                                  const ModelParams& params) {
  std::string response = inner_->send(messages, params);
  store_->append(request_hash(messages, params),
                 canonical_request_json(messages, params), response);
  return response;
}

const std::string& InterpretationCache::acquire(
    const std::string& database_name, const std::string& rendered_dump,
    Transport& client, const ModelParams& params) {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = cache_.find(database_name);
  if (it != cache_.end()) return it->second;
  ++hits_;
  std::string response =
      client.send({Message{Role::User, rendered_dump}}, params);
  if (response.empty())
    throw TransportError("empty interpretation for database " + database_name);
  return cache_.emplace(database_name, std::move(response)).first->second;
}

ConversationScript build_translation_conversation(
    const std::string& rendered_dump, const std::string& interpretation,
    const std::string& question, std::vector<std::string>* warnings) {
  ConversationScript script;
  script.purpose = ScriptPurpose::Translation;
  script.messages.push_back({Role::User, rendered_dump});
  if (interpretation.empty()) {
    if (warnings)
      warnings->push_back("empty interpretation, assistant context omitted");
  } else {
    script.messages.push_back({Role::Assistant, interpretation});
  }
  script.messages.push_back(
      {Role::User, std::string(kTranslationInstruction) + question});
  return script;
}

namespace {

std::string trim(std::string_view s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

// Case-insensitive whole-word search.
size_t find_word(std::string_view haystack, std::string_view word) {
  auto is_word_char = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  };
  for (size_t i = 0; i + word.size() <= haystack.size(); ++i) {
    bool match = true;
    for (size_t j = 0; j < word.size(); ++j) {
      if (std::toupper(static_cast<unsigned char>(haystack[i + j])) != word[j]) {
        match = false;
        break;
      }
    }
    if (!match) continue;
    if (i > 0 && is_word_char(haystack[i - 1])) continue;
    size_t end = i + word.size();
    if (end < haystack.size() && is_word_char(haystack[end])) continue;
    return i;
  }
  return std::string_view::npos;
}

}  // namespace

std::string extract_sql(std::string_view response) {
  size_t fence = response.find("```");
  if (fence != std::string_view::npos) {
    size_t body = response.find('\n', fence);
    if (body == std::string_view::npos) body = fence + 3;
    else ++body;
    size_t close = response.find("```", body);
    std::string_view block = close == std::string_view::npos
                                 ? response.substr(body)
                                 : response.substr(body, close - body);
    std::string out = trim(block);
    if (!out.empty()) return out;
  }
  size_t sel = find_word(response, "SELECT");
  size_t with = find_word(response, "WITH");
  size_t start = std::min(sel, with);
  if (start == std::string_view::npos) return std::string(kExtractionFailure);
  std::string_view tail = response.substr(start);
  size_t semi = tail.rfind(';');
  if (semi != std::string_view::npos) tail = tail.substr(0, semi + 1);
  return trim(tail);
}

}  // namespace sqlaudit
