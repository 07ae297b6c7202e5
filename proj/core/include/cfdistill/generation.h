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

#ifndef CFDISTILL_GENERATION_H_
#define CFDISTILL_GENERATION_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cfdistill/errors.h"
#include "cfdistill/prompt.h"
#include "cfdistill/types.h"

namespace cfdistill {

struct GenerationParams {
  double temperature = 0.8;
  double frequency_penalty = 0.8;
  double presence_penalty = 0.8;
  int n_samples = 1;
  int max_tokens = 24;
  std::vector<std::string> stop = {"\n"};
  // Only consulted by the mock backend.
  std::optional<uint64_t> seed;

  // Throws InputError on out-of-range values.
  void validate() const;

  // Stable hash of every field, hex encoded.
  std::string fingerprint() const;
};

struct GenerationResult {
  // At most params.n_samples strings, in sample order.
  std::vector<std::string> completions;
  std::vector<AttemptRecord> attempts;
};

// A text-completion service. Implementations must be safe to call from
// several threads at once.
class GenerationBackend {
 public:
  virtual ~GenerationBackend() = default;

  // Throws TransportError when the request could not be served after
  // retries and FatalBackendError on authentication or quota failures.
  virtual GenerationResult generate(const PromptRequest &request,
                                    const GenerationParams &params) = 0;
};

// Offline backend: completion i for a prompt is a phrase picked from a
// lexicon by FNV-1a over (prompt text, seed, i). A pure function of its
// inputs, so whole pipeline runs are reproducible byte for byte.
class MockBackend : public GenerationBackend {
 public:
  static constexpr std::string_view kTimestamp = "1970-01-01T00:00:00.000Z";

  MockBackend();
  explicit MockBackend(std::vector<std::string> lexicon);

  // One phrase per line; blank lines are ignored.
  static MockBackend from_file(const std::filesystem::path &path);

  static const std::vector<std::string> &default_lexicon();

  GenerationResult generate(const PromptRequest &request,
                            const GenerationParams &params) override;

 private:
  std::vector<std::string> lexicon_;
};

// Cuts `completion` at the first stop sequence and normalizes whitespace.
std::string clean_completion(std::string_view completion,
                             std::span<const std::string> stop);

// One line of the request log.
struct RequestLogEntry {
  std::string timestamp;
  std::string example_id;
  std::string direction;
  size_t span_start = 0;
  size_t span_end = 0;
  int attempt = 0;
  int status = 0;

  std::string to_line() const;
};

struct OvergenerateOptions {
  // Masked-mode template and demonstrations; ignored in insertion mode.
  std::string masked_template = std::string(kDefaultMaskedTemplate);
  // Demonstration pool; `icl_count` of them are picked per direction,
  // preferring ones whose label is the target.
  std::vector<IclExample> icl_pool;
  size_t icl_count = 4;
};

struct OvergenerateResult {
  std::vector<CandidatePerturbation> candidates;
  std::vector<RequestLogEntry> log;
  size_t requests = 0;
  size_t failed_requests = 0;
};

// Issues exactly one request per span and emits one candidate per non-empty
// cleaned completion. Transport failures on a span are logged and skipped;
// FatalBackendError propagates.
OvergenerateResult overgenerate(const NliExample &example,
                                std::span<const Span> spans,
                                Direction direction, PromptMode mode,
                                const GenerationParams &params,
                                GenerationBackend &backend,
                                const OvergenerateOptions &options = {});

// Same, appending to `out`. When FatalBackendError propagates, `out` still
// holds every candidate and log line produced so far, including the
// attempts of the failing request.
void overgenerate_into(const NliExample &example, std::span<const Span> spans,
                       Direction direction, PromptMode mode,
                       const GenerationParams &params,
                       GenerationBackend &backend,
                       const OvergenerateOptions &options,
                       OvergenerateResult &out);

}  // namespace cfdistill

#endif  // CFDISTILL_GENERATION_H_
