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


#ifndef CFDISTILL_HTTP_BACKEND_H_
#define CFDISTILL_HTTP_BACKEND_H_

#include <string>

#include "cfdistill/generation.h"
#include "cfdistill/http_client.h"

namespace cfdistill {

struct HttpBackendOptions {
  HttpClientOptions client;
  std::string model;
  std::string completions_path = "/completions";
};

// Completion-style HTTP backend.
//
// Request:  POST {base_url}{completions_path}
//   {"model", "prompt", "suffix" (insertion mode only), "temperature",
//    "frequency_penalty", "presence_penalty", "n", "max_tokens", "stop"}
// Response: {"choices": [{"text": ..., "index": i}, ...]}
//
// In insertion mode the prompt is the text before the span and the suffix
// the text after it, so the service fills the gap.
class HttpBackend : public GenerationBackend {
 public:
  explicit HttpBackend(HttpBackendOptions options);

  GenerationResult generate(const PromptRequest &request,
                            const GenerationParams &params) override;

  // The JSON body sent for `request`, exposed for tests.
  std::string request_body(const PromptRequest &request,
                           const GenerationParams &params) const;

 private:
  HttpBackendOptions options_;
  HttpJsonClient client_;
};

}  // namespace cfdistill

#endif  // CFDISTILL_HTTP_BACKEND_H_
