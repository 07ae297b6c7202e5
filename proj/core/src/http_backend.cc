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


#include "cfdistill/http_backend.h"

#include <algorithm>

#include <nlohmann/json.hpp>

namespace cfdistill {

HttpBackend::HttpBackend(HttpBackendOptions options)
    : options_(std::move(options)), client_(options_.client) {}

std::string HttpBackend::request_body(const PromptRequest &request,
                                      const GenerationParams &params) const {
  nlohmann::ordered_json j;
  j["model"] = options_.model;
  if (request.mode == PromptMode::kMasked) {
    j["prompt"] = request.prompt;
  } else {
    j["prompt"] = request.prefix;
    j["suffix"] = request.suffix;
  }
  j["temperature"] = params.temperature;
  j["frequency_penalty"] = params.frequency_penalty;
  j["presence_penalty"] = params.presence_penalty;
  j["n"] = params.n_samples;
  j["max_tokens"] = params.max_tokens;
  j["stop"] = params.stop;
  return j.dump();
}

GenerationResult HttpBackend::generate(const PromptRequest &request,
                                       const GenerationParams &params) {
  params.validate();
  HttpResponse response =
      client_.post_json(options_.completions_path, request_body(request, params));

  std::vector<std::pair<int64_t, std::string>> choices;
  try {
    const auto j = nlohmann::json::parse(response.body);
    for (const auto &choice : j.at("choices")) {
      const int64_t index =
          choice.contains("index") ? choice.at("index").get<int64_t>()
                                   : static_cast<int64_t>(choices.size());
      choices.emplace_back(index, choice.at("text").get<std::string>());
    }
  } catch (const nlohmann::json::exception &e) {
    throw TransportError(std::string("malformed completion response: ") +
                             e.what(),
                         std::move(response.attempts));
  }
  std::stable_sort(choices.begin(), choices.end(),
                   [](const auto &a, const auto &b) { return a.first < b.first; });

  GenerationResult result;
  result.attempts = std::move(response.attempts);
  for (auto &[index, text] : choices) {
    if (result.completions.size() == static_cast<size_t>(params.n_samples)) {
      break;
    }
    result.completions.push_back(std::move(text));
  }
  return result;
}

}  // namespace cfdistill
