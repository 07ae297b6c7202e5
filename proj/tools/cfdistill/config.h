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


#ifndef CFDISTILL_TOOLS_CONFIG_H_
#define CFDISTILL_TOOLS_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cfdistill/filters.h"
#include "cfdistill/generation.h"
#include "cfdistill/http_client.h"
#include "cfdistill/metrics/otdd.h"
#include "cfdistill/spanner.h"

namespace cfdistill::cli {

struct EndpointConfig {
  // "mock" or "http".
  std::string kind = "mock";
  std::string base_url;
  std::string token_env;
  std::map<std::string, std::string> headers;
  double timeout_s = 60.0;
  double rate_limit_rps = 10.0;
  size_t max_in_flight = 4;
  RetryPolicy retry;

  HttpClientOptions client_options() const;
};

struct BackendConfig {
  EndpointConfig endpoint;
  std::string model;
  // Mock lexicon file, one phrase per line; empty uses the built-in one.
  std::string lexicon;
};

struct ScorerConfig {
  EndpointConfig endpoint;
  size_t max_batch = 32;
  // Mock override table; empty for none.
  std::string overrides;
};

struct GenerateConfig {
  GenerationParams params;
  PromptMode mode = PromptMode::kMasked;
  // Short names; empty means every direction.
  std::vector<std::string> directions;
  size_t workers = 4;
  // Masked template file; empty uses the built-in template.
  std::string template_path;
  // Demonstration file; empty uses the bundled set.
  std::string icl_path;
  size_t icl_count = 4;
};

struct FilterConfig {
  bool heuristic = true;
  bool teacher = true;
  HeuristicConfig heuristic_config;
  TeacherConfig teacher_config;
};

struct EvalConfig {
  // Subset of flip-rate, self-bleu, otdd, sensitivity, cf-accuracy; empty
  // runs every metric whose inputs are present.
  std::vector<std::string> metrics;
  int max_n = 4;
  size_t embedding_dim = 256;
  OtddConfig otdd;
};

struct PathsConfig {
  std::string input;
  std::string stats;
  std::string candidates;
  std::string base;
  std::string subset;
  std::string counterfactuals;
  std::string original;
  std::string annotations;
  std::string pairs;
};

struct RunConfig {
  uint64_t seed = 0;
  std::string out_dir = "out";
  BackendConfig backend;
  ScorerConfig scorer;
  GenerateConfig generate;
  ChunkerConfig chunker;
  FilterConfig filter;
  double select_fraction = 1.0 / 3.0;
  EvalConfig eval;
  PathsConfig paths;

  RunConfig();

  // Range checks across all sections; throws InputError.
  void validate() const;
};

// Overlays the keys present in `j` onto `config`. Unknown keys and type
// mismatches raise InputError naming the offending key.
void apply_json(const nlohmann::json &j, RunConfig &config);

// Reads a JSON config file onto the defaults.
RunConfig load_config(const std::filesystem::path &path);

// Every field, in a fixed order.
nlohmann::ordered_json to_json(const RunConfig &config);

}  // namespace cfdistill::cli

#endif  // CFDISTILL_TOOLS_CONFIG_H_
