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


#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "cfdistill/filters.h"
#include "cfdistill/prompt.h"
#include "cfdistill/spanner.h"

namespace cfdistill {
namespace {

const std::vector<std::string> kPremises = {
    "A man in a red shirt is riding a bike down the street.",
    "Two young children in blue jerseys, one with the number 9 and one with "
    "the number 2 are standing on wooden steps in a bathroom and washing "
    "their hands in a sink.",
    "A woman is not taking money for any of her sticks.",
};

void BM_ExtractSpans(benchmark::State &state) {
  for (auto _ : state) {
    for (const auto &p : kPremises) benchmark::DoNotOptimize(extract_spans(p));
  }
  state.SetItemsProcessed(state.iterations() * kPremises.size());
}
BENCHMARK(BM_ExtractSpans);

void BM_HeuristicFilter(benchmark::State &state) {
  const HeuristicFilter filter(
      HeuristicContext::from_prompts(kDefaultMaskedTemplate, {}), {});
  CandidatePerturbation c;
  c.premise = kPremises[0];
  c.hypothesis = "A person is outdoors.";
  c.span = {0, 5, "A man"};
  c.replacement = "An elderly woman";
  c.new_premise = "An elderly woman in a red shirt is riding a bike down the "
                  "street.";
  c.direction = Direction::from(Label::kEntailment)[0];
  for (auto _ : state) benchmark::DoNotOptimize(filter.check(c));
}
BENCHMARK(BM_HeuristicFilter);

}  // namespace
}  // namespace cfdistill

BENCHMARK_MAIN();
