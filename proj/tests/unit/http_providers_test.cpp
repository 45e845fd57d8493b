// Copyright 2026 The MediFact Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>
#include <httplib.h>

#include <atomic>
#include <chrono>
#include <thread>

#include <nlohmann/json.hpp>

#include "medifact/error.hpp"
#include "medifact/qa.hpp"
#include "medifact/translation.hpp"

using medifact::Error;
using medifact::ErrorKind;
using medifact::HttpEndpoint;
using medifact::Language;
using nlohmann::json;

namespace {

// Local server on an ephemeral port, stopped on destruction.
class LocalServer {
 public:
  LocalServer() {
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~LocalServer() {
    server_.stop();
    thread_.join();
  }

  httplib::Server& server() { return server_; }
  std::string url(const std::string& path) const {
    return "http://127.0.0.1:" + std::to_string(port_) + path;
  }

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

HttpEndpoint endpoint(const std::string& url, int retries = 0, int timeout_ms = 2000) {
  return HttpEndpoint{url, std::chrono::milliseconds(timeout_ms), retries, ""};
}

}  // namespace

TEST_CASE("http translator speaks the LibreTranslate request shape") {
  LocalServer local;
  json seen;
  local.server().Post("/translate", [&](const httplib::Request& req, httplib::Response& res) {
    seen = json::parse(req.body);
    res.set_content(json{{"translatedText", "[" + seen["target"].get<std::string>() + "] " +
                                                seen["q"].get<std::string>()}}
                        .dump(),
                    "application/json");
  });
  HttpEndpoint ep = endpoint(local.url("/translate"));
  ep.api_key = "secret";
  const medifact::HttpTranslator translator("http", ep);
  CHECK(translator.translate("rest the area", Language::kEn, Language::kEs) == "[es] rest the area");
  CHECK(seen["source"] == "en");
  CHECK(seen["format"] == "text");
  CHECK(seen["api_key"] == "secret");
  CHECK(translator.translate("same", Language::kZh, Language::kZh) == "same");
}

TEST_CASE("http generator posts prompt and passages") {
  LocalServer local;
  local.server().Post("/generate", [&](const httplib::Request& req, httplib::Response& res) {
    const json body = json::parse(req.body);
    res.set_content(json{{"text", "  Answer:\t" + body["passages"][0].get<std::string>() + " "}}.dump(),
                    "application/json");
  });
  const medifact::HttpGenerator generator("http", endpoint(local.url("/generate")));
  CHECK_FALSE(generator.deterministic());
  medifact::FusedFeature fused{{}, {}, medifact::ImageEmbedding({1.0}, "toy"), {}};
  const medifact::RankedPassages passages = {{"apply cream", "E1", 0.9}};
  CHECK(medifact::abstractive_answer("q", fused, passages, generator) == "Answer: apply cream");
}

TEST_CASE("transient failures are retried") {
  LocalServer local;
  std::atomic<int> calls{0};
  local.server().Post("/translate", [&](const httplib::Request&, httplib::Response& res) {
    if (++calls < 3) {
      res.status = 503;
      return;
    }
    res.set_content(R"({"translatedText":"ok"})", "application/json");
  });
  const medifact::HttpTranslator patient("http", endpoint(local.url("/translate"), 2));
  CHECK(patient.translate("x", Language::kEn, Language::kZh) == "ok");
  CHECK(calls == 3);

  calls = 0;
  const medifact::HttpTranslator impatient("http", endpoint(local.url("/translate"), 1));
  try {
    impatient.translate("x", Language::kEn, Language::kZh);
    FAIL("expected a provider error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kProvider);
    CHECK(std::string(e.what()).find("503") != std::string::npos);
  }
  CHECK(calls == 2);
}

TEST_CASE("timeouts, bad bodies and dead endpoints become provider errors") {
  LocalServer local;
  local.server().Post("/slow", [&](const httplib::Request&, httplib::Response& res) {
    std::this_thread::sleep_for(std::chrono::milliseconds(600));
    res.set_content(R"({"text":"late"})", "application/json");
  });
  local.server().Post("/garbage", [&](const httplib::Request&, httplib::Response& res) {
    res.set_content("not json", "text/plain");
  });
  local.server().Post("/wrong", [&](const httplib::Request&, httplib::Response& res) {
    res.set_content(R"({"answer":"x"})", "application/json");
  });
  medifact::FusedFeature fused{{}, {}, medifact::ImageEmbedding({1.0}, "toy"), {}};
  for (const char* path : {"/slow", "/garbage", "/wrong"}) {
    const medifact::HttpGenerator generator("http", endpoint(local.url(path), 0, 200));
    CAPTURE(path);
    CHECK_THROWS_AS(generator.generate({"q", {}, &fused}), Error);
    try {
      medifact::abstractive_answer("q", fused, {}, generator);
      FAIL("expected a generation error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kGeneration);
    }
  }
  const medifact::HttpTranslator dead("http", endpoint("http://127.0.0.1:1/translate", 1, 200));
  CHECK_THROWS_AS(dead.translate("x", Language::kEn, Language::kEs), Error);
  CHECK_THROWS_AS(medifact::HttpTranslator("http", endpoint("ftp://example/x")), Error);
}
