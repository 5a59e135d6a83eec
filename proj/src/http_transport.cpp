#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <chrono>
#include <thread>

#include <json.hpp>

#include "sqlaudit/llm.hpp"

namespace sqlaudit {

using nlohmann::json;

namespace {

class HttpTransport : public Transport {
 public:
  explicit HttpTransport(HttpTransportConfig cfg) : cfg_(std::move(cfg)) {}

  std::string send(const std::vector<Message>& messages,
                   const ModelParams& params) override {
    json body;
    body["model"] = params.model;
    body["temperature"] = params.temperature;
    body["messages"] = json::array();
    for (const auto& m : messages)
      body["messages"].push_back(
          {{"role", std::string(role_name(m.role))}, {"content", m.content}});

    std::string last_error;
    int delay_ms = cfg_.retry.base_delay_ms;
    for (int attempt = 0; attempt < cfg_.retry.max_attempts; ++attempt) {
      if (attempt > 0) {
        std::this_thread::sleep_for(std::chrono::milliseconds(delay_ms));
        delay_ms *= 2;
      }
      httplib::Client client(cfg_.endpoint);
      client.set_read_timeout(120, 0);
      httplib::Headers headers;
      if (!cfg_.api_key.empty())
        headers.emplace("Authorization", "Bearer " + cfg_.api_key);
      auto res = client.Post(cfg_.path, headers, body.dump(),
                             "application/json");
      if (!res) {
        last_error = "connection failure: " + httplib::to_string(res.error());
        continue;
      }
      if (res->status == 429 || res->status >= 500) {
        last_error = "HTTP " + std::to_string(res->status);
        continue;
      }
      if (res->status != 200)
        throw TransportError("HTTP " + std::to_string(res->status) + ": " +
                             res->body);
      json j = json::parse(res->body, nullptr, false);
      if (j.is_discarded() || !j.contains("choices") || j["choices"].empty())
        throw TransportError("malformed chat completion response");
      return j["choices"][0]["message"]["content"].get<std::string>();
    }
    throw TransportError("transport failed after " +
                         std::to_string(cfg_.retry.max_attempts) +
                         " attempts: " + last_error);
  }

 private:
  HttpTransportConfig cfg_;
};

}  // namespace

std::unique_ptr<Transport> make_http_transport(const HttpTransportConfig& cfg) {
  return std::make_unique<HttpTransport>(cfg);
}

}  // namespace sqlaudit
