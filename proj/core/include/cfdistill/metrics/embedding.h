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


#ifndef CFDISTILL_METRICS_EMBEDDING_H_
#define CFDISTILL_METRICS_EMBEDDING_H_

#include <cstddef>
#include <string_view>
#include <vector>

namespace cfdistill {

// Maps text to a fixed-dimension feature vector.
class Embedder {
 public:
  virtual ~Embedder() = default;
  virtual size_t dimension() const = 0;
  virtual std::vector<double> embed(std::string_view text) const = 0;
};

// Feature hashing of lowercased alphanumeric word unigrams and bigrams:
// each n-gram adds 1 to bucket fnv1a64(ngram) % dimension. The vector is
// L2-normalized; text without tokens maps to the zero vector.
class HashingEmbedder : public Embedder {
 public:
  static constexpr size_t kDefaultDimension = 256;

  explicit HashingEmbedder(size_t dimension = kDefaultDimension);

  size_t dimension() const override { return dimension_; }
  std::vector<double> embed(std::string_view text) const override;

  // Unnormalized bucket counts.
  std::vector<double> counts(std::string_view text) const;

 private:
  size_t dimension_;
};

// Scales `v` to unit L2 norm in place; the zero vector is left unchanged.
void l2_normalize(std::vector<double> &v);

}  // namespace cfdistill

#endif  // CFDISTILL_METRICS_EMBEDDING_H_
