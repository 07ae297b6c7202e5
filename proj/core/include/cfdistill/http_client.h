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

#ifndef CFDISTILL_HTTP_CLIENT_H_
#define CFDISTILL_HTTP_CLIENT_H_

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "cfdistill/errors.h"
#include "cfdistill/retry.h"

namespace cfdistill {

struct HttpEndpoint {
  // e.g. "https://api.example.com/v1" or "http://127.0.0.1:8000".
  std::string base_url;
  // Name of the environment variable holding a bearer token. Empty means
  // no Authorization header.
  std::string token_env;
  // Extra headers sent with every request.
  std::map<std::string, std::string> headers;
  double timeout_s = 60.0;
};

struct HttpClientOptions {
  HttpEndpoint endpoint;
  RetryPolicy retry;
  // Request starts per second; <= 0 disables limiting.
  double rate_limit_rps = 10.0;
  size_t max_in_flight = 4;
  Sleeper sleeper = real_sleeper();
};

struct HttpResponse {
  std::string body;
  std::vector<AttemptRecord> attempts;
};

// JSON-over-HTTP client with retry, rate limiting and an in-flight bound.
//
// Status handling: 2xx succeeds. 401 and 403 abort the run
// (FatalBackendError), as does 429 whose body mentions
// "insufficient_quota". Other 429s, 408, 5xx and connection failures are
// retried with exponential backoff. Any other status fails the request
// without retrying (TransportError). Exhausted retries raise
// TransportError.
class HttpJsonClient {
 public:
  explicit HttpJsonClient(HttpClientOptions options);
  ~HttpJsonClient();

  HttpJsonClient(const HttpJsonClient &) = delete;
  HttpJsonClient &operator=(const HttpJsonClient &) = delete;

  HttpResponse post_json(const std::string &path, const std::string &body);

  // Single GET attempt; true on a 2xx response.
  bool get_ok(const std::string &path);

  const HttpClientOptions &options() const { return options_; }

 private:
  struct Impl;

  HttpClientOptions options_;
  std::unique_ptr<Impl> impl_;
};

}  // namespace cfdistill

#endif  // CFDISTILL_HTTP_CLIENT_H_
