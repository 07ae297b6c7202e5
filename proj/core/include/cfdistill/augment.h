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


#ifndef CFDISTILL_AUGMENT_H_
#define CFDISTILL_AUGMENT_H_

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "cfdistill/types.h"

namespace cfdistill {

// Precomputed training-dynamics statistics of one example.
struct CartographyStats {
  std::string example_id;
  double confidence = 0.0;
  double variability = 0.0;
};

// Line records {"id", "confidence", "variability"}. Throws DatasetError on
// malformed records, out-of-range values or duplicate ids.
std::vector<CartographyStats> read_cartography_stats(
    const std::filesystem::path &path);

// ceil(q * n), guarded against floating-point overshoot (0.3 * 10).
size_t ambiguous_count(size_t n, double q);

// The ambiguous_count(N, q) examples with the highest variability, ties
// broken by ascending id, returned in dataset order. Throws InputError when
// q is outside (0, 1] or an example has no stats record.
std::vector<NliExample> select_ambiguous(
    std::span<const NliExample> dataset,
    std::span<const CartographyStats> stats, double q);

// Duplicate key: whitespace-normalized premise and hypothesis plus label.
std::string dedupe_key(const NliExample &example);

struct AugmentResult {
  std::vector<NliExample> output;
  size_t inputs = 0;
  // inputs - output.size()
  size_t duplicates_removed = 0;
  // Kept records whose id clashed with an earlier record and got a suffix.
  size_t ids_renamed = 0;
};

// base, then new items of source_subset, then new items of counterfactuals;
// the first occurrence of each key wins.
AugmentResult build_augmented(std::span<const NliExample> base,
                              std::span<const NliExample> source_subset,
                              std::span<const NliExample> counterfactuals);

}  // namespace cfdistill

#endif  // CFDISTILL_AUGMENT_H_
