// Copyright 2026 The blendsem Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "blendsem/service.h"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <thread>

#include "blendsem/error.h"
#include "httplib.h"
#include "json.hpp"

namespace blendsem {

std::string with_retries(const RetryPolicy& policy,
                         const std::function<std::string()>& fn) {
  const int attempts = std::max(1, policy.max_attempts);
  auto backoff = std::chrono::duration<double, std::milli>(policy.initial_backoff);
  for (int attempt = 1;; ++attempt) {
    try {
      return fn();
    } catch (const ServiceError& e) {
      if (attempt >= attempts) {
        throw ServiceError(std::string(e.what()) + " (after " +
                           std::to_string(attempts) + " attempts)");
      }
    }
    std::this_thread::sleep_for(backoff);
    backoff *= policy.multiplier;
  }
}

HttpCompletionClient::HttpCompletionClient(HttpClientConfig config)
    : config_(std::move(config)) {
  if (config_.endpoint.empty()) throw ConfigError("service endpoint is empty");
}

std::string HttpCompletionClient::complete(const CompletionRequest& request) {
  return with_retries(config_.retry, [&] { return complete_once(request); });
}

std::string HttpCompletionClient::complete_once(const CompletionRequest& request) {
  using nlohmann::json;
  json messages = json::array();
  if (!request.system.empty()) {
    messages.push_back({{"role", "system"}, {"content", request.system}});
  }
  if (request.image) {
    const std::string url = "data:" + request.image->mime_type + ";base64," +
                            base64_encode(request.image->bytes);
    messages.push_back(
        {{"role", "user"},
         {"content", json::array({{{"type", "image_url"},
                                   {"image_url", {{"url", url}}}},
                                  {{"type", "text"}, {"text", request.prompt}}})}});
  } else {
    messages.push_back({{"role", "user"}, {"content", request.prompt}});
  }
  const json body = {{"model", request.model},
                     {"messages", messages},
                     {"temperature", request.decoding.temperature},
                     {"max_tokens", request.decoding.max_tokens}};

  httplib::Client cli(config_.endpoint);
  if (!cli.is_valid()) throw ConfigError("invalid endpoint " + config_.endpoint);
  const auto secs = static_cast<time_t>(config_.timeout.count());
  cli.set_connection_timeout(secs);
  cli.set_read_timeout(secs);
  cli.set_write_timeout(secs);

  httplib::Headers headers;
  if (const char* token = std::getenv(config_.token_env.c_str());
      token && *token) {
    headers.emplace("Authorization", std::string("Bearer ") + token);
  }
  auto res = cli.Post(config_.path, headers, body.dump(), "application/json");
  if (!res) {
    throw ServiceError("request to " + config_.endpoint + " failed: " +
                       httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw ServiceError("service returned HTTP " + std::to_string(res->status));
  }
  const json reply = json::parse(res->body, nullptr, false);
  if (reply.is_discarded()) throw ServiceError("service reply is not JSON");
  try {
    return reply.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const json::exception&) {
    throw ServiceError("service reply lacks choices[0].message.content");
  }
}

BoundedClient::BoundedClient(std::shared_ptr<CompletionClient> inner,
                             int max_in_flight)
    : inner_(std::move(inner)), slots_(std::clamp(max_in_flight, 1, 1024)) {}

std::string BoundedClient::complete(const CompletionRequest& request) {
  slots_.acquire();
  struct Release {
    std::counting_semaphore<1024>& s;
    ~Release() { s.release(); }
  } release{slots_};
  return inner_->complete(request);
}

void parallel_for(std::size_t n, int jobs,
                  const std::function<void(std::size_t)>& fn) {
  std::vector<std::exception_ptr> errors(n);
  const auto workers =
      std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, jobs)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            fn(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::string base64_encode(std::string_view bytes) {
  static constexpr char kAlphabet[] =
      "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::size_t i = 0;
  for (; i + 2 < bytes.size(); i += 3) {
    const auto n = (static_cast<unsigned char>(bytes[i]) << 16) |
                   (static_cast<unsigned char>(bytes[i + 1]) << 8) |
                   static_cast<unsigned char>(bytes[i + 2]);
    out.push_back(kAlphabet[(n >> 18) & 63]);
    out.push_back(kAlphabet[(n >> 12) & 63]);
    out.push_back(kAlphabet[(n >> 6) & 63]);
    out.push_back(kAlphabet[n & 63]);
  }
  if (const auto rest = bytes.size() - i; rest > 0) {
    unsigned n = static_cast<unsigned char>(bytes[i]) << 16;
    if (rest == 2) n |= static_cast<unsigned char>(bytes[i + 1]) << 8;
    out.push_back(kAlphabet[(n >> 18) & 63]);
    out.push_back(kAlphabet[(n >> 12) & 63]);
    out.push_back(rest == 2 ? kAlphabet[(n >> 6) & 63] : '=');
    out.push_back('=');
  }
  return out;
}

}  // namespace blendsem
