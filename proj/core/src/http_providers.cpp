// Copyright 2026 The MediFact Authors
// SPDX-License-Identifier: Apache-2.0

#include <httplib.h>
#include <spdlog/spdlog.h>

#include <nlohmann/json.hpp>

#include "medifact/error.hpp"
#include "medifact/qa.hpp"
#include "medifact/translation.hpp"

namespace medifact {
namespace {

using nlohmann::json;

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

SplitUrl split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos || url.substr(0, scheme_end) != "http") {
    throw Error(ErrorKind::kConfig, "provider url must start with http:// : '" + url + "'");
  }
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

// POSTs `body` and returns the parsed JSON response, retrying on any failure.
json post_json(const std::string& provider_id, const HttpEndpoint& endpoint, const json& body) {
  const SplitUrl url = split_url(endpoint.url);
  httplib::Client client(url.origin);
  const auto seconds = std::chrono::duration_cast<std::chrono::seconds>(endpoint.timeout);
  const auto micros = std::chrono::duration_cast<std::chrono::microseconds>(
      endpoint.timeout - seconds);
  client.set_connection_timeout(seconds.count(), micros.count());
  client.set_read_timeout(seconds.count(), micros.count());
  client.set_write_timeout(seconds.count(), micros.count());

  std::string last_error;
  const std::string payload = body.dump();
  for (int attempt = 0; attempt <= std::max(0, endpoint.retries); ++attempt) {
    auto response = client.Post(url.path, payload, "application/json");
    if (!response) {
      last_error = httplib::to_string(response.error());
    } else if (response->status != 200) {
      last_error = "HTTP status " + std::to_string(response->status);
    } else {
      try {
        return json::parse(response->body);
      } catch (const json::exception& e) {
        last_error = std::string("malformed response body: ") + e.what();
      }
    }
    spdlog::debug("provider '{}' attempt {} failed: {}", provider_id, attempt + 1, last_error);
  }
  throw Error(ErrorKind::kProvider, "provider '" + provider_id + "' at " + endpoint.url +
                                        " failed: " + last_error);
}

}  // namespace

HttpGenerator::HttpGenerator(std::string id, HttpEndpoint endpoint)
    : id_(std::move(id)), endpoint_(std::move(endpoint)) {
  split_url(endpoint_.url);
}

std::string HttpGenerator::generate(const GenerationRequest& request) const {
  json body = {{"prompt", std::string(request.prompt)},
               {"passages", std::vector<std::string>(request.passages.begin(),
                                                     request.passages.end())}};
  if (!endpoint_.api_key.empty()) body["api_key"] = endpoint_.api_key;
  const json reply = post_json(id_, endpoint_, body);
  auto it = reply.find("text");
  if (it == reply.end() || !it->is_string()) {
    throw Error(ErrorKind::kProvider, "provider '" + id_ + "' reply lacks a 'text' string");
  }
  return it->get<std::string>();
}

HttpTranslator::HttpTranslator(std::string id, HttpEndpoint endpoint)
    : id_(std::move(id)), endpoint_(std::move(endpoint)) {
  split_url(endpoint_.url);
}

std::string HttpTranslator::translate(std::string_view text, Language source,
                                      Language target) const {
  if (source == target) return std::string(text);
  json body = {{"q", std::string(text)},
               {"source", std::string(to_string(source))},
               {"target", std::string(to_string(target))},
               {"format", "text"}};
  if (!endpoint_.api_key.empty()) body["api_key"] = endpoint_.api_key;
  const json reply = post_json(id_, endpoint_, body);
  auto it = reply.find("translatedText");
  if (it == reply.end() || !it->is_string()) {
    throw Error(ErrorKind::kProvider,
                "provider '" + id_ + "' reply lacks a 'translatedText' string");
  }
  return it->get<std::string>();
}

}  // namespace medifact
