#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sqlaudit {

enum class Role { User, Assistant, System };

std::string_view role_name(Role role);

struct Message {
  Role role = Role::User;
  std::string content;
};

enum class ScriptPurpose { Interpretation, Translation, DcProbe };

struct ConversationScript {
  std::vector<Message> messages;
  std::string database_name;
  std::string question_id;
  ScriptPurpose purpose = ScriptPurpose::Translation;
};

struct ModelParams {
  std::string model = "gpt-3.5-turbo";
  double temperature = 0.0;
};

struct TransportError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Minimal chat-completion interface: send messages, receive assistant text.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual std::string send(const std::vector<Message>& messages,
                           const ModelParams& params) = 0;
};

// BLAKE2b hex digest of the canonical JSON encoding of (model, temperature,
// messages). Any prompt or parameter change changes the hash.
std::string request_hash(const std::vector<Message>& messages,
                         const ModelParams& params);
std::string canonical_request_json(const std::vector<Message>& messages,
                                   const ModelParams& params);

// Append-only JSON-lines log of request hash -> response. Concurrent reads
// are lock-free after load; appends are serialized.
class TranscriptStore {
 public:
  TranscriptStore() = default;
  // movable despite the mutex; moves only happen before concurrent use
  TranscriptStore(TranscriptStore&& other) noexcept {
    *this = std::move(other);
  }
  TranscriptStore& operator=(TranscriptStore&& other) noexcept {
    records_ = std::move(other.records_);
    requests_ = std::move(other.requests_);
    append_path_ = std::move(other.append_path_);
    return *this;
  }

  static TranscriptStore load(const std::string& path);
  // Opens for appending; creates the file if needed.
  void open_for_append(const std::string& path);

  std::optional<std::string> lookup(const std::string& hash) const;
  void append(const std::string& hash, const std::string& request_json,
              const std::string& response);
  size_t size() const { return records_.size(); }
  // Raw request JSON per record, in insertion order (used by audit checks).
  const std::vector<std::string>& request_log() const { return requests_; }

 private:
  std::map<std::string, std::string> records_;
  std::vector<std::string> requests_;
  std::string append_path_;
  mutable std::mutex mutex_;
};

// Replays recorded responses; an unknown hash is an error, never a silent
// mismatch.
class ReplayTransport : public Transport {
 public:
  explicit ReplayTransport(std::shared_ptr<TranscriptStore> store)
      : store_(std::move(store)) {}
  std::string send(const std::vector<Message>& messages,
                   const ModelParams& params) override;

 private:
  std::shared_ptr<TranscriptStore> store_;
};

// Forwards to an inner transport and records every exchange.
class RecordTransport : public Transport {
 public:
  RecordTransport(std::unique_ptr<Transport> inner,
                  std::shared_ptr<TranscriptStore> store)
      : inner_(std::move(inner)), store_(std::move(store)) {}
  std::string send(const std::vector<Message>& messages,
                   const ModelParams& params) override;

 private:
  std::unique_ptr<Transport> inner_;
  std::shared_ptr<TranscriptStore> store_;
};

struct RetryPolicy {
  int max_attempts = 3;
  int base_delay_ms = 500;  // doubled per attempt
};

struct HttpTransportConfig {
  std::string endpoint;  // e.g. https://api.openai.com
  std::string path = "/v1/chat/completions";
  std::string api_key;
  RetryPolicy retry;
};

// OpenAI-style chat-completions client with exponential-backoff retry.
std::unique_ptr<Transport> make_http_transport(const HttpTransportConfig& cfg);

// ---- Conversation protocol -------------------------------------------------

inline constexpr std::string_view kTranslationInstruction =
    "Translate in SQL the following query. Answer using only SQL. ";

// Caches interpretations per database; every question reuses the one
// interpretation the model first produced.
class InterpretationCache {
 public:
  // Sends the rendered dump as the sole user message (at most once per
  // database name) and returns the assistant response verbatim.
  // Throws TransportError on failure or empty response.
  const std::string& acquire(const std::string& database_name,
                             const std::string& rendered_dump,
                             Transport& client, const ModelParams& params);
  size_t transport_hits() const { return hits_; }

 private:
  std::map<std::string, std::string> cache_;
  size_t hits_ = 0;
  std::mutex mutex_;
};

// messages = [user: dump, assistant: interpretation, user: instruction +
// question]. An empty interpretation omits the assistant message and records
// a warning.
ConversationScript build_translation_conversation(
    const std::string& rendered_dump, const std::string& interpretation,
    const std::string& question, std::vector<std::string>* warnings = nullptr);

inline constexpr std::string_view kExtractionFailure = "<no-sql-extracted>";

// First fenced code block if present; else the suffix from the first
// SELECT/WITH keyword, with prose after the final semicolon dropped.
// Returns kExtractionFailure when no SQL is found.
std::string extract_sql(std::string_view response);

}  // namespace sqlaudit
