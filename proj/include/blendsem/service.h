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

#ifndef BLENDSEM_SERVICE_H_
#define BLENDSEM_SERVICE_H_

#include <chrono>
#include <functional>
#include <memory>
#include <optional>
#include <semaphore>
#include <string>
#include <vector>

namespace blendsem {

struct DecodingParams {
  double temperature = 0.0;
  int max_tokens = 2048;
};

struct ImagePayload {
  std::string mime_type;  // e.g. "image/png"
  std::string bytes;
};

struct CompletionRequest {
  std::string model;
  std::string prompt;
  DecodingParams decoding;
  // Sent as a system message when non-empty.
  std::string system;
  std::optional<ImagePayload> image;
};

// Text-completion service: request in, plain text out. Implementations
// throw ServiceError on transport failure.
class CompletionClient {
 public:
  virtual ~CompletionClient() = default;
  virtual std::string complete(const CompletionRequest& request) = 0;
};

struct RetryPolicy {
  int max_attempts = 3;
  std::chrono::milliseconds initial_backoff{500};
  double multiplier = 2.0;
};

// Calls `fn` until it succeeds, sleeping initial_backoff * multiplier^k
// between attempts. Only ServiceError is retried; the last one is rethrown.
std::string with_retries(const RetryPolicy& policy,
                         const std::function<std::string()>& fn);

struct HttpClientConfig {
  // Base URL, e.g. "http://localhost:8000". Requests go to
  // <endpoint><path> as OpenAI-style chat completions.
  std::string endpoint;
  std::string path = "/v1/chat/completions";
  // Name of the environment variable holding the bearer token. Credentials
  // are never taken from flags or files.
  std::string token_env = "BLENDSEM_API_TOKEN";
  std::chrono::seconds timeout{120};
  RetryPolicy retry;
};

// POSTs {"model", "messages", "temperature", "max_tokens"} and returns
// choices[0].message.content. Images travel as data-URL content parts.
class HttpCompletionClient : public CompletionClient {
 public:
  explicit HttpCompletionClient(HttpClientConfig config);
  std::string complete(const CompletionRequest& request) override;

 private:
  std::string complete_once(const CompletionRequest& request);
  HttpClientConfig config_;
};

// Caps the number of in-flight requests through a shared client.
class BoundedClient : public CompletionClient {
 public:
  BoundedClient(std::shared_ptr<CompletionClient> inner, int max_in_flight);
  std::string complete(const CompletionRequest& request) override;

 private:
  std::shared_ptr<CompletionClient> inner_;
  std::counting_semaphore<1024> slots_;
};

// Runs fn(0..n-1) on up to `jobs` threads; results keep index order.
// The first exception (lowest index) is rethrown after all tasks finish.
void parallel_for(std::size_t n, int jobs,
                  const std::function<void(std::size_t)>& fn);

std::string base64_encode(std::string_view bytes);

}  // namespace blendsem

#endif  // BLENDSEM_SERVICE_H_
