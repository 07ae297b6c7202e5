// Copyright 2026 The cfdistill Authors
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


#include "cfdistill/http_client.h"

#include <cstdlib>
#include <semaphore>

#include <httplib.h>
#include <spdlog/spdlog.h>

namespace cfdistill {
namespace {

struct ParsedUrl {
  std::string origin;  // scheme://host[:port]
  std::string prefix;  // path without trailing slash
};

ParsedUrl parse_base_url(const std::string &url) {
  const size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw InputError("base URL needs a scheme: " + url);
  }
  const std::string scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") {
    throw InputError("unsupported URL scheme: " + url);
  }
  const size_t path_start = url.find('/', scheme_end + 3);
  ParsedUrl out;
  if (path_start == std::string::npos) {
    out.origin = url;
  } else {
    out.origin = url.substr(0, path_start);
    out.prefix = url.substr(path_start);
    while (!out.prefix.empty() && out.prefix.back() == '/') {
      out.prefix.pop_back();
    }
  }
  if (out.origin.size() <= scheme_end + 3) {
    throw InputError("base URL has no host: " + url);
  }
  return out;
}

enum class Outcome { kSuccess, kRetry, kFatal, kFail };

Outcome classify(int status, const std::string &body) {
  if (status >= 200 && status < 300) return Outcome::kSuccess;
  if (status == 401 || status == 403) return Outcome::kFatal;
  if (status == 429) {
    return body.find("insufficient_quota") != std::string::npos
               ? Outcome::kFatal
               : Outcome::kRetry;
  }
  if (status == 0 || status == 408 || status >= 500) return Outcome::kRetry;
  return Outcome::kFail;
}

}  // namespace

struct HttpJsonClient::Impl {
  Impl(const HttpClientOptions &options)
      : url(parse_base_url(options.endpoint.base_url)),
        bucket(options.rate_limit_rps, options.rate_limit_rps,
               options.sleeper),
        in_flight(static_cast<std::ptrdiff_t>(
            std::max<size_t>(1, options.max_in_flight))) {
    for (const auto &[k, v] : options.endpoint.headers) headers.emplace(k, v);
    const std::string &env = options.endpoint.token_env;
    if (!env.empty()) {
      if (const char *token = std::getenv(env.c_str()); token && *token) {
        headers.emplace("Authorization", std::string("Bearer ") + token);
      } else {
        spdlog::warn("environment variable {} is not set; sending no token",
                     env);
      }
    }
  }

  std::unique_ptr<httplib::Client> client(double timeout_s) const {
    auto c = std::make_unique<httplib::Client>(url.origin);
    const auto secs = static_cast<time_t>(timeout_s);
    const auto usecs = static_cast<time_t>((timeout_s - secs) * 1e6);
    c->set_connection_timeout(secs, usecs);
    c->set_read_timeout(secs, usecs);
    c->set_write_timeout(secs, usecs);
    c->set_default_headers(headers);
    return c;
  }

  ParsedUrl url;
  httplib::Headers headers;
  TokenBucket bucket;
  std::counting_semaphore<> in_flight;
};

HttpJsonClient::HttpJsonClient(HttpClientOptions options)
    : options_(std::move(options)) {
  options_.retry.validate();
  if (!options_.sleeper) options_.sleeper = real_sleeper();
  impl_ = std::make_unique<Impl>(options_);
}

HttpJsonClient::~HttpJsonClient() = default;

HttpResponse HttpJsonClient::post_json(const std::string &path,
                                       const std::string &body) {
  const std::string full_path = impl_->url.prefix + path;
  std::vector<AttemptRecord> attempts;
  std::string last_error;
  for (int attempt = 1; attempt <= options_.retry.max_attempts; ++attempt) {
    if (attempt > 1) {
      options_.sleeper(options_.retry.delay_before_retry(attempt - 1));
    }
    impl_->bucket.acquire();
    int status = 0;
    std::string response_body;
    {
      impl_->in_flight.acquire();
      auto client = impl_->client(options_.endpoint.timeout_s);
      auto res = client->Post(full_path, body, "application/json");
      impl_->in_flight.release();
      if (res) {
        status = res->status;
        response_body = std::move(res->body);
      } else {
        last_error = httplib::to_string(res.error());
      }
    }
    attempts.push_back({utc_timestamp(), attempt, status});

    switch (classify(status, response_body)) {
      case Outcome::kSuccess:
        return {std::move(response_body), std::move(attempts)};
      case Outcome::kFatal:
        throw FatalBackendError("POST " + full_path + " failed with status " +
                                    std::to_string(status) + ": " +
                                    response_body.substr(0, 200),
                                std::move(attempts));
      case Outcome::kFail:
        throw TransportError("POST " + full_path + " failed with status " +
                                 std::to_string(status),
                             std::move(attempts));
      case Outcome::kRetry:
        if (status != 0) last_error = "status " + std::to_string(status);
        spdlog::debug("POST {} attempt {} failed ({}), retrying", full_path,
                      attempt, last_error);
        break;
    }
  }
  throw TransportError("POST " + full_path + " gave up after " +
                           std::to_string(attempts.size()) +
                           " attempts: " + last_error,
                       std::move(attempts));
}

bool HttpJsonClient::get_ok(const std::string &path) {
  auto client = impl_->client(options_.endpoint.timeout_s);
  auto res = client->Get(impl_->url.prefix + path);
  return res && res->status >= 200 && res->status < 300;
}

}  // namespace cfdistill
