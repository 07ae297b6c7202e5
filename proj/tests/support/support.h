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


#ifndef CFDISTILL_TESTS_SUPPORT_H_
#define CFDISTILL_TESTS_SUPPORT_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "cfdistill/errors.h"
#include "cfdistill/metrics/ot.h"
#include "cfdistill/types.h"

namespace httplib {
class Server;
struct Request;
struct Response;
}  // namespace httplib

namespace cfdistill::testing {

using Rng = std::mt19937_64;

std::filesystem::path data_path(const std::string &relative);

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir &) = delete;
  TempDir &operator=(const TempDir &) = delete;

  const std::filesystem::path &path() const { return path_; }
  std::filesystem::path operator/(const std::string &name) const {
    return path_ / name;
  }

 private:
  std::filesystem::path path_;
};

std::string read_file(const std::filesystem::path &path);
void write_file(const std::filesystem::path &path, const std::string &text);

// Relative path -> contents for every regular file under `dir`.
std::map<std::string, std::string> snapshot(const std::filesystem::path &dir);

// ---- generators ----

double uniform(Rng &rng, double lo = 0.0, double hi = 1.0);
size_t uniform_index(Rng &rng, size_t n);

// Random point of the probability simplex with `k` entries.
std::vector<double> random_simplex(Rng &rng, size_t k);
LabelDistribution random_distribution(Rng &rng);
Label random_label(Rng &rng);

std::string random_word(Rng &rng);
// 1..max_words words, sometimes with punctuation and ragged spacing.
std::string random_sentence(Rng &rng, size_t max_words = 12);
NliExample random_example(Rng &rng, const std::string &id);

Matrix random_cost(Rng &rng, size_t rows, size_t cols);

// ---- oracles ----

// Exact OT for a 3x3 problem whose marginals are integer multiples of
// 1/units: enumerates every transport plan on that grid. The polytope's
// vertices lie on the grid, so the minimum is the true optimum.
double brute_force_ot_3x3(const Matrix &cost, const std::vector<int> &a_units,
                          const std::vector<int> &b_units, int units);

// ---- fixtures ----

// One row of tests/data/filter_corpus.jsonl: a candidate plus the expected
// heuristic outcome ("accept" or a reject reason name).
struct CorpusRow {
  CandidatePerturbation candidate;
  std::string expected;
};
std::vector<CorpusRow> load_filter_corpus();

// ---- stub HTTP server ----

class StubServer {
 public:
  using Handler =
      std::function<void(const httplib::Request &, httplib::Response &)>;

  StubServer();
  ~StubServer();

  void post(const std::string &path, Handler handler);
  void get(const std::string &path, Handler handler);

  // Binds to a free local port and serves on a background thread.
  void start();
  std::string url() const;

 private:
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  int port_ = 0;
};

// A local port with nothing listening on it.
int unused_port();

// ---- pipeline harness ----

// Copies the 20-example fixture into `workdir`/inputs, then runs select,
// generate, filter, augment and eval from inside `workdir` with relative
// paths, writing to `workdir`/out. Returns the first non-zero exit code,
// or 0.
int run_fixture_pipeline(const std::filesystem::path &workdir);

}  // namespace cfdistill::testing

#endif  // CFDISTILL_TESTS_SUPPORT_H_
