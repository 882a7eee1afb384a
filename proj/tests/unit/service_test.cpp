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
#include <chrono>
#include <cstdlib>
#include <memory>
#include <thread>
#include <vector>

#include "blendsem/error.h"
#include "gtest/gtest.h"
#include "support/fake_service.h"

namespace blendsem {
namespace {

using testing::LocalCompletionServer;
using testing::ScriptedClient;

RetryPolicy fast_retry(int attempts) {
  return {attempts, std::chrono::milliseconds(1), 2.0};
}

TEST(WithRetriesTest, SucceedsAfterTransientFailures) {
  int calls = 0;
  const auto r = with_retries(fast_retry(3), [&calls] {
    if (++calls < 3) throw ServiceError("down");
    return std::string("ok");
  });
  EXPECT_EQ(r, "ok");
  EXPECT_EQ(calls, 3);
}

TEST(WithRetriesTest, GivesUpAfterMaxAttempts) {
  int calls = 0;
  EXPECT_THROW(with_retries(fast_retry(4),
                            [&calls]() -> std::string {
                              ++calls;
                              throw ServiceError("down");
                            }),
               ServiceError);
  EXPECT_EQ(calls, 4);
}

TEST(WithRetriesTest, OtherErrorsAreNotRetried) {
  int calls = 0;
  EXPECT_THROW(with_retries(fast_retry(4),
                            [&calls]() -> std::string {
                              ++calls;
                              throw ParseError("bad");
                            }),
               ParseError);
  EXPECT_EQ(calls, 1);
}

TEST(HttpClientTest, SendsChatRequestAndReadsContent) {
  LocalCompletionServer server([](const nlohmann::json& body) {
    EXPECT_EQ(body.at("model"), "m");
    EXPECT_EQ(body.at("max_tokens"), 77);
    EXPECT_EQ(body.at("temperature"), 0.0);
    const auto& msgs = body.at("messages");
    EXPECT_EQ(msgs.back().at("role"), "user");
    return std::string("hello");
  });
  HttpClientConfig cfg;
  cfg.endpoint = server.endpoint();
  cfg.retry = fast_retry(1);
  HttpCompletionClient client(cfg);
  CompletionRequest req;
  req.model = "m";
  req.prompt = "p";
  req.decoding.max_tokens = 77;
  EXPECT_EQ(client.complete(req), "hello");
}

TEST(HttpClientTest, ImageTravelsAsDataUrl) {
  std::string url;
  LocalCompletionServer server([&url](const nlohmann::json& body) {
    for (const auto& part : body.at("messages").back().at("content")) {
      if (part.at("type") == "image_url") url = part.at("image_url").at("url");
    }
    return std::string("x");
  });
  HttpClientConfig cfg;
  cfg.endpoint = server.endpoint();
  HttpCompletionClient client(cfg);
  CompletionRequest req;
  req.prompt = "p";
  req.image = ImagePayload{"image/png", "abc"};
  client.complete(req);
  EXPECT_EQ(url, "data:image/png;base64,YWJj");
}

TEST(HttpClientTest, TokenComesFromEnvironment) {
  LocalCompletionServer server([](const nlohmann::json&) { return std::string("x"); });
  HttpClientConfig cfg;
  cfg.endpoint = server.endpoint();
  cfg.token_env = "BLENDSEM_TEST_TOKEN";
  ::unsetenv("BLENDSEM_TEST_TOKEN");
  HttpCompletionClient client(cfg);
  client.complete({});
  EXPECT_EQ(server.last_authorization(), "");
  ::setenv("BLENDSEM_TEST_TOKEN", "s3cret", 1);
  client.complete({});
  EXPECT_EQ(server.last_authorization(), "Bearer s3cret");
  ::unsetenv("BLENDSEM_TEST_TOKEN");
}

TEST(HttpClientTest, HttpErrorIsRetriedThenServiceError) {
  LocalCompletionServer server([](const nlohmann::json&) { return std::string("x"); });
  server.set_status(503);
  HttpClientConfig cfg;
  cfg.endpoint = server.endpoint();
  cfg.retry = fast_retry(3);
  HttpCompletionClient client(cfg);
  EXPECT_THROW(client.complete({}), ServiceError);
  EXPECT_EQ(server.calls(), 3);
}

TEST(HttpClientTest, UnreachableEndpointIsServiceError) {
  int port = 0;
  {
    LocalCompletionServer server([](const nlohmann::json&) { return std::string(); });
    port = std::stoi(server.endpoint().substr(server.endpoint().rfind(':') + 1));
  }
  HttpClientConfig cfg;
  cfg.endpoint = "http://127.0.0.1:" + std::to_string(port);
  cfg.timeout = std::chrono::seconds(2);
  cfg.retry = fast_retry(2);
  HttpCompletionClient client(cfg);
  EXPECT_THROW(client.complete({}), ServiceError);
}

TEST(HttpClientTest, EmptyEndpointIsConfigError) {
  EXPECT_THROW(HttpCompletionClient(HttpClientConfig{}), ConfigError);
}

// Counts concurrent calls into the wrapped client.
class SlowClient : public CompletionClient {
 public:
  std::string complete(const CompletionRequest&) override {
    const int now = ++in_flight_;
    int seen = peak_.load();
    while (now > seen && !peak_.compare_exchange_weak(seen, now)) {
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
    --in_flight_;
    return "ok";
  }
  int peak() const { return peak_; }

 private:
  std::atomic<int> in_flight_{0};
  std::atomic<int> peak_{0};
};

TEST(BoundedClientTest, CapsInFlightRequests) {
  auto inner = std::make_shared<SlowClient>();
  BoundedClient bounded(inner, 2);
  parallel_for(24, 6, [&bounded](std::size_t) { bounded.complete({}); });
  EXPECT_LE(inner->peak(), 2);
  EXPECT_GE(inner->peak(), 1);
}

TEST(BoundedClientTest, NonPositiveCapActsAsOne) {
  auto inner = std::make_shared<SlowClient>();
  BoundedClient bounded(inner, 0);
  parallel_for(8, 4, [&bounded](std::size_t) { bounded.complete({}); });
  EXPECT_EQ(inner->peak(), 1);
}

TEST(ParallelForTest, VisitsEveryIndexOnce) {
  std::vector<std::atomic<int>> hits(1000);
  parallel_for(hits.size(), 4, [&hits](std::size_t i) { ++hits[i]; });
  for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
  parallel_for(0, 4, [](std::size_t) { FAIL(); });
}

TEST(ParallelForTest, RethrowsLowestIndexError) {
  std::atomic<int> done{0};
  try {
    parallel_for(50, 3, [&done](std::size_t i) {
      ++done;
      if (i == 7 || i == 30) throw InputError("bad " + std::to_string(i));
    });
    FAIL();
  } catch (const InputError& e) {
    EXPECT_STREQ(e.what(), "bad 7");
  }
  EXPECT_EQ(done.load(), 50);
}

TEST(Base64Test, KnownVectors) {
  EXPECT_EQ(base64_encode(""), "");
  EXPECT_EQ(base64_encode("f"), "Zg==");
  EXPECT_EQ(base64_encode("fo"), "Zm8=");
  EXPECT_EQ(base64_encode("foo"), "Zm9v");
  EXPECT_EQ(base64_encode("foobar"), "Zm9vYmFy");
}

TEST(ScriptedClientTest, FailMarkerThrows) {
  ScriptedClient c({ScriptedClient::kFail, "later"});
  EXPECT_THROW(c.complete({}), ServiceError);
  EXPECT_EQ(c.complete({}), "later");
  EXPECT_EQ(c.complete({}), "later");
}

}  // namespace
}  // namespace blendsem
