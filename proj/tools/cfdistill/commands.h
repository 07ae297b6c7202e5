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


#ifndef CFDISTILL_TOOLS_COMMANDS_H_
#define CFDISTILL_TOOLS_COMMANDS_H_

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "config.h"

namespace cfdistill::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitFatal = 2;

// Parses argv-style `args` (args[0] is the program name), runs the chosen
// command and returns its exit code. Normal output goes to `out`, error
// messages to `err`.
int run(const std::vector<std::string> &args, std::ostream &out,
        std::ostream &err);

// Stage entry points; the config already carries CLI overrides. Each
// writes into config.out_dir and throws on failure.
void cmd_select(const RunConfig &config, std::ostream &out);
void cmd_generate(const RunConfig &config, std::ostream &out);
void cmd_filter(const RunConfig &config, std::ostream &out);
void cmd_augment(const RunConfig &config, std::ostream &out);
void cmd_eval(const RunConfig &config, std::ostream &out);

// Contents of the bundled demonstration file.
std::string_view bundled_icl_examples();

}  // namespace cfdistill::cli

#endif  // CFDISTILL_TOOLS_COMMANDS_H_
