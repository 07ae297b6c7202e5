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

// Internal helpers for line-record JSON files.

#ifndef CFDISTILL_SRC_JSONL_H_
#define CFDISTILL_SRC_JSONL_H_

#include <filesystem>
#include <fstream>
#include <functional>
#include <istream>
#include <string>

#include <nlohmann/json.hpp>

#include "cfdistill/errors.h"
#include "cfdistill/types.h"

namespace cfdistill::internal {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

// Calls `fn(record, line_number, line_index)` for each non-blank line of
// `in`. line_number is 1-based, line_index 0-based; `name` labels errors.
inline void for_each_record(
    std::istream &in, const std::string &name,
    const std::function<void(const Json &, size_t, size_t)> &fn) {
  std::string line;
  size_t index = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const size_t this_index = index++;
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    Json record;
    try {
      record = Json::parse(line);
    } catch (const Json::parse_error &e) {
      throw DatasetError(name, this_index + 1,
                         std::string("invalid JSON: ") + e.what());
    }
    if (!record.is_object()) {
      throw DatasetError(name, this_index + 1, "record is not a JSON object");
    }
    fn(record, this_index + 1, this_index);
  }
}

inline void for_each_record(
    const std::filesystem::path &path,
    const std::function<void(const Json &, size_t, size_t)> &fn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open input file: " + path.string());
  for_each_record(in, path.string(), fn);
}

inline const Json &require_field(const Json &record, const char *name,
                                 const std::string &path, size_t line) {
  auto it = record.find(name);
  if (it == record.end() || it->is_null()) {
    throw DatasetError(path, line,
                       std::string("missing required field \"") + name + "\"");
  }
  return *it;
}

inline std::string require_string(const Json &record, const char *name,
                                  const std::string &path, size_t line) {
  const Json &v = require_field(record, name, path, line);
  if (!v.is_string()) {
    throw DatasetError(path, line,
                       std::string("field \"") + name + "\" must be a string");
  }
  return v.get<std::string>();
}

inline double require_number(const Json &record, const char *name,
                             const std::string &path, size_t line) {
  const Json &v = require_field(record, name, path, line);
  if (!v.is_number()) {
    throw DatasetError(path, line,
                       std::string("field \"") + name + "\" must be a number");
  }
  return v.get<double>();
}

inline size_t require_offset(const Json &record, const char *name,
                             const std::string &path, size_t line) {
  const Json &v = require_field(record, name, path, line);
  if (!v.is_number_unsigned()) {
    throw DatasetError(path, line,
                       std::string("field \"") + name +
                           "\" must be a non-negative integer");
  }
  return v.get<size_t>();
}

inline Label require_label(const Json &record, const char *name,
                           const std::string &path, size_t line) {
  std::string text = require_string(record, name, path, line);
  auto label = label_from_name(text);
  if (!label) {
    throw DatasetError(path, line, "unknown label \"" + text + "\"");
  }
  return *label;
}

// Parses {"entailment": p, "neutral": p, "contradiction": p}.
inline LabelDistribution parse_distribution(const Json &v) {
  if (!v.is_object()) throw InputError("distribution must be an object");
  std::array<double, 3> probs{};
  for (Label l : kAllLabels) {
    auto it = v.find(std::string(label_name(l)));
    if (it == v.end() || !it->is_number()) {
      throw InputError("distribution is missing \"" +
                       std::string(label_name(l)) + "\"");
    }
    probs[label_index(l)] = it->get<double>();
  }
  return LabelDistribution(probs);
}

OrderedJson distribution_json(const LabelDistribution &dist);

}  // namespace cfdistill::internal

#endif  // CFDISTILL_SRC_JSONL_H_
