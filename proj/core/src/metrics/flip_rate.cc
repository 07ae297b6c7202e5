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


#include "cfdistill/metrics/flip_rate.h"

#include "jsonl.h"

namespace cfdistill {

FlipAnnotation FlipAnnotation::make(Label original, Label target,
                                    Label annotated) {
  if (original == target) {
    throw InputError("annotation target label equals the original label");
  }
  return {original, target, annotated};
}

double flip_rate(std::span<const FlipAnnotation> annotations) {
  if (annotations.empty()) throw InputError("flip_rate needs annotations");
  size_t hits = 0;
  for (const auto &a : annotations) hits += a.annotated == a.target;
  return static_cast<double>(hits) / static_cast<double>(annotations.size());
}

double soft_flip_rate(std::span<const FlipAnnotation> annotations) {
  if (annotations.empty()) throw InputError("soft_flip_rate needs annotations");
  size_t hits = 0;
  for (const auto &a : annotations) hits += a.annotated != a.original;
  return static_cast<double>(hits) / static_cast<double>(annotations.size());
}

std::vector<FlipAnnotation> read_annotations(
    const std::filesystem::path &path) {
  std::vector<FlipAnnotation> out;
  const std::string name = path.string();
  internal::for_each_record(
      path, [&](const internal::Json &r, size_t line, size_t) {
        const Label original =
            internal::require_label(r, "original_label", name, line);
        const Label target =
            internal::require_label(r, "target_label", name, line);
        const Label annotated =
            internal::require_label(r, "annotated_label", name, line);
        if (original == target) {
          throw DatasetError(name, line, "target label equals original label");
        }
        out.push_back({original, target, annotated});
      });
  return out;
}

}  // namespace cfdistill
