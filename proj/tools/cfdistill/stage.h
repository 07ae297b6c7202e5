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


// Helpers shared by the command implementations.

#ifndef CFDISTILL_TOOLS_STAGE_H_
#define CFDISTILL_TOOLS_STAGE_H_

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cfdistill/scorer.h"
#include "config.h"

namespace cfdistill::cli {

// An output directory holding the echoed config and a request log.
class Stage {
 public:
  // Creates the directory and writes config.json and an empty
  // requests.log.
  explicit Stage(const RunConfig &config);

  std::filesystem::path path(const std::string &name) const {
    return dir_ / name;
  }

  void write_json(const std::string &name,
                  const nlohmann::ordered_json &j) const;

  // Writes `lines` to `name + ".partial"`.
  void write_partial(const std::string &name,
                     const std::vector<std::string> &lines) const;

 private:
  std::filesystem::path dir_;
};

// Throws InputError naming `flag` when `path` is empty or missing.
std::filesystem::path require_input(const std::string &path,
                                    const std::string &flag);

// Mock or HTTP scorer per config; HTTP scorers must pass a health check,
// otherwise FatalBackendError.
std::unique_ptr<Scorer> make_scorer(const ScorerConfig &config);

}  // namespace cfdistill::cli

#endif  // CFDISTILL_TOOLS_STAGE_H_
