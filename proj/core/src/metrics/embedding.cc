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


#include "cfdistill/metrics/embedding.h"

#include <cmath>

#include "cfdistill/errors.h"
#include "cfdistill/text.h"

namespace cfdistill {

void l2_normalize(std::vector<double> &v) {
  double sq = 0.0;
  for (double x : v) sq += x * x;
  if (sq == 0.0) return;
  const double inv = 1.0 / std::sqrt(sq);
  for (double &x : v) x *= inv;
}

HashingEmbedder::HashingEmbedder(size_t dimension) : dimension_(dimension) {
  if (dimension == 0) throw InputError("embedding dimension must be positive");
}

std::vector<double> HashingEmbedder::counts(std::string_view text) const {
  std::vector<double> v(dimension_, 0.0);
  const auto tokens = alnum_tokens(to_lower_ascii(text));
  for (size_t i = 0; i < tokens.size(); ++i) {
    v[fnv1a64(tokens[i]) % dimension_] += 1.0;
    if (i + 1 < tokens.size()) {
      v[fnv1a64(tokens[i] + ' ' + tokens[i + 1]) % dimension_] += 1.0;
    }
  }
  return v;
}

std::vector<double> HashingEmbedder::embed(std::string_view text) const {
  std::vector<double> v = counts(text);
  l2_normalize(v);
  return v;
}

}  // namespace cfdistill
