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


#include "support.h"

#include <arpa/inet.h>
#include <httplib.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "cfdistill/dataset.h"
#include "commands.h"

namespace cfdistill::testing {

namespace fs = std::filesystem;

fs::path data_path(const std::string &relative) {
  return fs::path(CFDISTILL_TEST_DATA_DIR) / relative;
}

TempDir::TempDir() {
  std::string tmpl = (fs::temp_directory_path() / "cfdistill-XXXXXX").string();
  if (mkdtemp(tmpl.data()) == nullptr) {
    throw std::runtime_error("mkdtemp failed");
  }
  path_ = tmpl;
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

std::string read_file(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path &path, const std::string &text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
}

std::map<std::string, std::string> snapshot(const fs::path &dir) {
  std::map<std::string, std::string> files;
  for (const auto &entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    files[fs::relative(entry.path(), dir).generic_string()] =
        read_file(entry.path());
  }
  return files;
}

double uniform(Rng &rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

size_t uniform_index(Rng &rng, size_t n) {
  return std::uniform_int_distribution<size_t>(0, n - 1)(rng);
}

std::vector<double> random_simplex(Rng &rng, size_t k) {
  std::exponential_distribution<double> exp(1.0);
  std::vector<double> v(k);
  double total = 0.0;
  for (double &x : v) {
    x = exp(rng) + 1e-12;
    total += x;
  }
  for (double &x : v) x /= total;
  return v;
}

LabelDistribution random_distribution(Rng &rng) {
  auto v = random_simplex(rng, 3);
  // Renormalize the last entry so the sum check never trips on rounding.
  v[2] = std::max(0.0, 1.0 - v[0] - v[1]);
  return LabelDistribution(v[0], v[1], v[2]);
}

Label random_label(Rng &rng) { return kAllLabels[uniform_index(rng, 3)]; }

std::string random_word(Rng &rng) {
  static const std::vector<std::string> kWords = {
      "a",     "the",    "man",    "woman",  "dog",    "is",     "on",
      "in",    "red",    "street", "running", "sits",  "with",   "two",
      "kids",  "play",   "ball",   "near",   "river",  "old",    "car",
      "green", "bench",  "reads",  "book",   "under",  "tree",   "singer",
      "crowd", "jumps",  "over",   "fence",  "quickly", "blue",  "hat"};
  return kWords[uniform_index(rng, kWords.size())];
}

std::string random_sentence(Rng &rng, size_t max_words) {
  const size_t n = 1 + uniform_index(rng, max_words);
  std::string s;
  for (size_t i = 0; i < n; ++i) {
    if (i > 0) s += uniform_index(rng, 8) == 0 ? "  " : " ";
    std::string w = random_word(rng);
    if (i == 0 && uniform_index(rng, 2) == 0) w[0] = static_cast<char>(w[0] - 32);
    s += w;
    if (uniform_index(rng, 10) == 0) s += ",";
  }
  s += uniform_index(rng, 4) == 0 ? "" : ".";
  return s;
}

NliExample random_example(Rng &rng, const std::string &id) {
  NliExample e;
  e.id = id;
  e.premise = random_sentence(rng);
  e.hypothesis = random_sentence(rng, 6);
  e.label = random_label(rng);
  return e;
}

Matrix random_cost(Rng &rng, size_t rows, size_t cols) {
  Matrix m(rows, cols);
  for (size_t i = 0; i < rows; ++i) {
    for (size_t j = 0; j < cols; ++j) m(i, j) = uniform(rng);
  }
  return m;
}

double brute_force_ot_3x3(const Matrix &cost, const std::vector<int> &a,
                          const std::vector<int> &b, int units) {
  double best = std::numeric_limits<double>::infinity();
  for (int x00 = 0; x00 <= std::min(a[0], b[0]); ++x00) {
    for (int x01 = 0; x01 <= std::min(a[0] - x00, b[1]); ++x01) {
      const int x02 = a[0] - x00 - x01;
      if (x02 > b[2]) continue;
      for (int x10 = 0; x10 <= std::min(a[1], b[0] - x00); ++x10) {
        for (int x11 = 0; x11 <= std::min(a[1] - x10, b[1] - x01); ++x11) {
          const int x12 = a[1] - x10 - x11;
          if (x12 < 0 || x12 > b[2] - x02) continue;
          const int x20 = b[0] - x00 - x10;
          const int x21 = b[1] - x01 - x11;
          const int x22 = b[2] - x02 - x12;
          if (x20 < 0 || x21 < 0 || x22 < 0) continue;
          if (x20 + x21 + x22 != a[2]) continue;
          const int x[3][3] = {{x00, x01, x02}, {x10, x11, x12},
                               {x20, x21, x22}};
          double c = 0.0;
          for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) c += cost(i, j) * x[i][j];
          }
          best = std::min(best, c / units);
        }
      }
    }
  }
  return best;
}

std::vector<CorpusRow> load_filter_corpus() {
  const auto path = data_path("filter_corpus.jsonl");
  const auto candidates = read_candidates(path);
  std::ifstream in(path);
  std::vector<CorpusRow> rows;
  std::string line;
  size_t i = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    rows.push_back({candidates.at(i++),
                    nlohmann::json::parse(line).at("expected")});
  }
  return rows;
}

StubServer::StubServer() : server_(std::make_unique<httplib::Server>()) {}

StubServer::~StubServer() {
  server_->stop();
  if (thread_.joinable()) thread_.join();
}

void StubServer::post(const std::string &path, Handler handler) {
  server_->Post(path, std::move(handler));
}

void StubServer::get(const std::string &path, Handler handler) {
  server_->Get(path, std::move(handler));
}

void StubServer::start() {
  port_ = server_->bind_to_any_port("127.0.0.1");
  if (port_ <= 0) throw std::runtime_error("stub server could not bind");
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
}

std::string StubServer::url() const {
  return "http://127.0.0.1:" + std::to_string(port_);
}

int unused_port() {
  // Bind without listening, read the port back, close: connects are refused.
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) throw std::runtime_error("socket failed");
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = 0;
  socklen_t len = sizeof(addr);
  if (::bind(fd, reinterpret_cast<sockaddr *>(&addr), sizeof(addr)) != 0 ||
      ::getsockname(fd, reinterpret_cast<sockaddr *>(&addr), &len) != 0) {
    ::close(fd);
    throw std::runtime_error("bind failed");
  }
  ::close(fd);
  return ntohs(addr.sin_port);
}

namespace {

int run_cli(const std::vector<std::string> &args) {
  std::vector<std::string> argv = {"cfdistill"};
  argv.insert(argv.end(), args.begin(), args.end());
  std::ostringstream out, err;
  const int code = cli::run(argv, out, err);
  if (code != 0) {
    std::fprintf(stderr, "cfdistill %s failed (%d): %s\n", args[0].c_str(),
                 code, err.str().c_str());
  }
  return code;
}

class ScopedCwd {
 public:
  explicit ScopedCwd(const fs::path &dir) : saved_(fs::current_path()) {
    fs::current_path(dir);
  }
  ~ScopedCwd() { fs::current_path(saved_); }

 private:
  fs::path saved_;
};

}  // namespace

int run_fixture_pipeline(const fs::path &workdir) {
  fs::create_directories(workdir / "inputs");
  for (const auto &entry : fs::directory_iterator(data_path("pipeline"))) {
    fs::copy_file(entry.path(), workdir / "inputs" / entry.path().filename(),
                  fs::copy_options::overwrite_existing);
  }
  ScopedCwd cwd(workdir);
  const std::vector<std::vector<std::string>> stages = {
      {"select", "--out-dir", "out/select", "--input", "inputs/dataset.jsonl",
       "--stats", "inputs/stats.jsonl"},
      {"generate", "--out-dir", "out/generate", "--input",
       "out/select/selected.jsonl"},
      {"filter", "--out-dir", "out/filter", "--candidates",
       "out/generate/candidates.jsonl"},
      {"augment", "--out-dir", "out/augment", "--base", "inputs/dataset.jsonl",
       "--subset", "out/select/selected.jsonl", "--counterfactuals",
       "out/filter/distilled.jsonl"},
      {"eval", "--out-dir", "out/eval", "--original", "inputs/dataset.jsonl",
       "--counterfactuals", "out/filter/distilled.jsonl", "--annotations",
       "inputs/annotations.jsonl", "--pairs", "inputs/pairs.jsonl"},
  };
  for (std::vector<std::string> args : stages) {
    args.insert(args.begin() + 1, {"--config", "inputs/config.json"});
    if (int code = run_cli(args); code != 0) return code;
  }
  return 0;
}

}  // namespace cfdistill::testing
