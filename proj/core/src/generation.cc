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

#include "cfdistill/generation.h"

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "cfdistill/text.h"

namespace cfdistill {

void GenerationParams::validate() const {
  auto fail = [](const std::string &what) {
    throw InputError("invalid generation params: " + what);
  };
  if (!std::isfinite(temperature) || temperature < 0.0) {
    fail("temperature must be >= 0");
  }
  if (!std::isfinite(frequency_penalty)) fail("frequency_penalty not finite");
  if (!std::isfinite(presence_penalty)) fail("presence_penalty not finite");
  if (n_samples < 1) fail("n_samples must be positive");
  if (max_tokens < 1) fail("max_tokens must be positive");
}

std::string GenerationParams::fingerprint() const {
  nlohmann::ordered_json j;
  j["temperature"] = temperature;
  j["frequency_penalty"] = frequency_penalty;
  j["presence_penalty"] = presence_penalty;
  j["n"] = n_samples;
  j["max_tokens"] = max_tokens;
  j["stop"] = stop;
  j["seed"] = seed ? nlohmann::ordered_json(*seed) : nlohmann::ordered_json();
  return hex64(fnv1a64(j.dump()));
}

const std::vector<std::string> &MockBackend::default_lexicon() {
  static const std::vector<std::string> kLexicon = {
      "a red car",
      "is sleeping on the couch",
      "a group of children",
      "wearing a bright yellow raincoat",
      "is playing a violin",
      "an empty parking lot",
      "two elderly women",
      "is eating a sandwich",
      "in the middle of the ocean",
      "a black and white dog",
      "is painting a fence",
      "at a crowded train station",
      "is not moving",
      "a tall man",
      "with a broken umbrella",
      "is running a marathon",
      "a small kitten",
      "on a snowy mountain",
      "is reading a newspaper",
      "nobody",
      "three teenagers",
      "is repairing a bicycle",
      "in a dark library",
      "a chef",
      "is laughing loudly",
      "under a wooden bridge",
      "a police officer",
      "is climbing a ladder",
      "at the beach",
      "a woman in a blue dress",
      "is asleep",
      "a crowd of tourists",
  };
  return kLexicon;
}

MockBackend::MockBackend() : MockBackend(default_lexicon()) {}

MockBackend::MockBackend(std::vector<std::string> lexicon)
    : lexicon_(std::move(lexicon)) {
  if (lexicon_.empty()) throw InputError("mock lexicon is empty");
}

MockBackend MockBackend::from_file(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open mock lexicon: " + path.string());
  std::vector<std::string> lexicon;
  std::string line;
  while (std::getline(in, line)) {
    std::string phrase = normalize_whitespace(line);
    if (!phrase.empty()) lexicon.push_back(std::move(phrase));
  }
  return MockBackend(std::move(lexicon));
}

GenerationResult MockBackend::generate(const PromptRequest &request,
                                       const GenerationParams &params) {
  params.validate();
  const std::string text = request.text();
  const std::string seed = std::to_string(params.seed.value_or(0));
  GenerationResult result;
  for (int i = 0; i < params.n_samples; ++i) {
    const uint64_t h = hash_fields({text, seed, std::to_string(i)});
    std::string completion = lexicon_[h % lexicon_.size()];
    // Occasionally run past the stop sequence like a real model would.
    if ((h >> 40) % 5 == 0) completion += "\nConclusion: the answer is above";
    result.completions.push_back(std::move(completion));
  }
  result.attempts.push_back({std::string(kTimestamp), 1, 200});
  return result;
}

std::string clean_completion(std::string_view completion,
                             std::span<const std::string> stop) {
  size_t cut = completion.size();
  for (const std::string &s : stop) {
    if (s.empty()) continue;
    size_t pos = completion.find(s);
    if (pos != std::string_view::npos && pos < cut) cut = pos;
  }
  return normalize_whitespace(completion.substr(0, cut));
}

std::string RequestLogEntry::to_line() const {
  nlohmann::ordered_json j;
  j["ts"] = timestamp;
  j["example_id"] = example_id;
  j["direction"] = direction;
  j["span"] = {span_start, span_end};
  j["attempt"] = attempt;
  j["status"] = status;
  return j.dump();
}

OvergenerateResult overgenerate(const NliExample &example,
                                std::span<const Span> spans,
                                Direction direction, PromptMode mode,
                                const GenerationParams &params,
                                GenerationBackend &backend,
                                const OvergenerateOptions &options) {
  OvergenerateResult out;
  overgenerate_into(example, spans, direction, mode, params, backend, options,
                    out);
  return out;
}

void overgenerate_into(const NliExample &example, std::span<const Span> spans,
                       Direction direction, PromptMode mode,
                       const GenerationParams &params,
                       GenerationBackend &backend,
                       const OvergenerateOptions &options,
                       OvergenerateResult &out) {
  if (direction.source() != example.label) {
    throw InputError("direction " + direction.short_name() +
                     " does not start at the label of example " + example.id);
  }
  params.validate();
  const std::string fingerprint = params.fingerprint();
  const std::string dir_name = direction.short_name();
  std::vector<IclExample> icl;
  if (mode == PromptMode::kMasked) {
    icl = pick_icl_examples(options.icl_pool, direction.target(),
                            options.icl_count);
  }

  auto log_attempts = [&](const Span &span,
                          const std::vector<AttemptRecord> &attempts) {
    for (const AttemptRecord &a : attempts) {
      out.log.push_back({a.timestamp, example.id, dir_name, span.start,
                         span.end, a.attempt, a.status});
    }
  };

  for (const Span &span : spans) {
    PromptRequest request =
        mode == PromptMode::kMasked
            ? build_masked_prompt(example, span, direction, icl,
                                  options.masked_template)
            : build_insertion_prompt(example, span, direction);
    ++out.requests;
    GenerationResult result;
    try {
      result = backend.generate(request, params);
    } catch (const TransportError &e) {
      ++out.failed_requests;
      log_attempts(span, e.attempts());
      spdlog::warn("{} {} span [{}, {}): {}", example.id, dir_name, span.start,
                   span.end, e.what());
      continue;
    } catch (const FatalBackendError &e) {
      log_attempts(span, e.attempts());
      throw;
    }
    log_attempts(span, result.attempts);

    const size_t n = std::min<size_t>(result.completions.size(),
                                      static_cast<size_t>(params.n_samples));
    for (size_t i = 0; i < n; ++i) {
      std::string replacement =
          clean_completion(result.completions[i], params.stop);
      if (replacement.empty()) continue;
      CandidatePerturbation c;
      c.id = example.id + ":" + dir_name + ":" + std::to_string(span.start) +
             "-" + std::to_string(span.end) + ":" + std::to_string(i);
      c.example_id = example.id;
      c.premise = example.premise;
      c.hypothesis = example.hypothesis;
      c.span = span;
      c.direction = direction;
      c.mode = mode;
      c.sample_index = static_cast<int>(i);
      c.new_premise = splice_premise(example.premise, span, replacement);
      c.replacement = std::move(replacement);
      c.raw_completion = result.completions[i];
      c.params_fingerprint = fingerprint;
      out.candidates.push_back(std::move(c));
    }
  }
}

}  // namespace cfdistill
