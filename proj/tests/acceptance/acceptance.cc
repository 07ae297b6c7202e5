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


// Acceptance checks. Prints one PASS/FAIL line per criterion, each bounded
// by a wall-clock limit, and exits nonzero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "cfdistill/filters.h"
#include "cfdistill/metrics/counterfactual.h"
#include "cfdistill/metrics/flip_rate.h"
#include "cfdistill/metrics/ot.h"
#include "cfdistill/metrics/otdd.h"
#include "cfdistill/metrics/self_bleu.h"
#include "cfdistill/prompt.h"
#include "cfdistill/spanner.h"
#include "cfdistill/text.h"
#include "commands.h"
#include "support.h"

namespace cfdistill {
namespace {

namespace fs = std::filesystem;
using testing::Rng;

// Collects failure messages; `detail` is printed on the result line.
struct Check {
  std::vector<std::string> failures;
  std::string detail;
  int failed = 0;

  void expect(bool ok, const std::string &what) {
    if (!ok && failures.size() < 5) failures.push_back(what);
    if (!ok) ++failed;
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

struct Criterion {
  std::string name;
  double limit_s;
  std::function<void(Check &)> body;
};

// ---- counterfactual sensitivity ----

void sensitivity_identities(Check &c) {
  Rng rng(101);
  int binary = 0;
  double worst = 0.0;
  while (binary < 1000) {
    const double p = testing::uniform(rng);
    const double q = testing::uniform(rng);
    const std::vector<double> orig = {p, 1.0 - p};
    const std::vector<double> cf = {q, 1.0 - q};
    const size_t l = p >= 1.0 - p ? 0 : 1;
    const size_t lc = q >= 1.0 - q ? 0 : 1;
    if (l == lc) continue;
    const double closed = cf[lc] + orig[l] - 1.0;
    const double diff = std::abs(sensitivity(orig, cf) - closed);
    worst = std::max(worst, diff);
    c.expect(diff <= 1e-12, "binary pair " + std::to_string(binary));
    ++binary;
  }
  for (int i = 0; i < 1000; ++i) {
    const auto p = testing::random_distribution(rng);
    c.expect(sensitivity(p, p) == 0.0, "equal 3-class pair " + std::to_string(i));
  }
  c.detail = "1000 binary, max diff " + fmt(worst) + "; 1000 equal";
}

void teacher_delta_properties(Check &c) {
  Rng rng(102);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto a = testing::random_distribution(rng);
    const auto b = testing::random_distribution(rng);
    const Label t = testing::random_label(rng);
    const double ab = teacher_delta(a, b, t);
    const double ba = teacher_delta(b, a, t);
    worst = std::max(worst, std::abs(ab + ba));
    c.expect(ab == -ba, "antisymmetry at pair " + std::to_string(i));
    c.expect(std::abs(ab) <= 1.0, "bound at pair " + std::to_string(i));
  }
  c.detail = "1000 pairs, max |d(a,b)+d(b,a)| " + fmt(worst);
}

// ---- optimal transport ----

std::vector<int> random_units(Rng &rng, int units) {
  const int x = static_cast<int>(testing::uniform_index(rng, units + 1));
  const int y = static_cast<int>(testing::uniform_index(rng, units + 1));
  return {std::min(x, y), std::abs(x - y), units - std::max(x, y)};
}

std::vector<double> as_weights(const std::vector<int> &units, int total) {
  std::vector<double> w;
  for (int u : units) w.push_back(static_cast<double>(u) / total);
  return w;
}

void ot_oracles(Check &c) {
  Rng rng(103);
  double worst_rel = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const size_t n = 1 + testing::uniform_index(rng, 6);
    const size_t m = 1 + testing::uniform_index(rng, 6);
    const Matrix cost = testing::random_cost(rng, n, m);
    const auto a = testing::random_simplex(rng, n);
    const auto b = testing::random_simplex(rng, m);
    const double exact = exact_ot(cost, a, b);
    SinkhornOptions opt;
    opt.eps = 1e-3 * cost.max();
    const double approx = sinkhorn_ot(cost, a, b, opt).cost;
    const double rel = exact > 0.0 ? std::abs(approx - exact) / exact
                                   : std::abs(approx - exact);
    worst_rel = std::max(worst_rel, rel);
    c.expect(rel <= 0.01, std::to_string(n) + "x" + std::to_string(m) +
                              " sinkhorn " + fmt(approx) + " exact " +
                              fmt(exact));
  }
  constexpr int kUnits = 20;
  double worst_abs = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix cost = testing::random_cost(rng, 3, 3);
    const auto au = random_units(rng, kUnits);
    const auto bu = random_units(rng, kUnits);
    const double brute = testing::brute_force_ot_3x3(cost, au, bu, kUnits);
    const double got =
        exact_ot(cost, as_weights(au, kUnits), as_weights(bu, kUnits));
    worst_abs = std::max(worst_abs, std::abs(got - brute));
    c.expect(std::abs(got - brute) <= 1e-6,
             "3x3 brute force trial " + std::to_string(trial));
  }
  c.detail = "100 sinkhorn, max rel err " + fmt(worst_rel) +
             "; 100 brute 3x3, max abs err " + fmt(worst_abs);
}

EmbeddedDataset random_dataset(Rng &rng, size_t points, size_t dim) {
  EmbeddedDataset d;
  d.dimension = dim;
  for (size_t i = 0; i < points; ++i) {
    LabeledPoint p;
    for (size_t k = 0; k < dim; ++k) p.x.push_back(testing::uniform(rng, -1, 1));
    p.y = testing::random_label(rng);
    d.points.push_back(std::move(p));
  }
  return d;
}

void otdd_properties(Check &c) {
  Rng rng(104);
  double worst_self = 0.0;
  double worst_sym = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_dataset(rng, 8, 5);
    const auto b = random_dataset(rng, 8, 5);
    const double aa = std::abs(otdd(a, a));
    const double sym = std::abs(otdd(a, b) - otdd(b, a));
    worst_self = std::max(worst_self, aa);
    worst_sym = std::max(worst_sym, sym);
    c.expect(aa <= 1e-9, "identity trial " + std::to_string(trial));
    c.expect(sym <= 1e-9, "symmetry trial " + std::to_string(trial));
  }
  c.detail = "20 datasets, max |d(A,A)| " + fmt(worst_self) +
             ", max asymmetry " + fmt(worst_sym);
}

// ---- diversity and flip rates ----

void self_bleu_checks(Check &c) {
  const std::vector<std::string> dup(5, "two dogs play in the snow");
  const double d = self_bleu(dup);
  c.expect(std::abs(d - 1.0) <= 1e-9, "duplicate corpus " + fmt(d));

  const std::vector<std::string> disjoint = {
      "alpha beta gamma delta", "one two three four", "red green blue yellow"};
  const double z = self_bleu(disjoint);
  c.expect(z <= 1e-6, "disjoint corpus " + fmt(z));

  Rng rng(105);
  std::vector<std::string> corpus;
  for (int i = 0; i < 8; ++i) corpus.push_back(testing::random_sentence(rng));
  const double base = self_bleu(corpus);
  for (int trial = 0; trial < 10; ++trial) {
    std::shuffle(corpus.begin(), corpus.end(), rng);
    c.expect(std::abs(self_bleu(corpus) - base) <= 1e-12,
             "permutation " + std::to_string(trial));
  }

  // Reference value computed independently with NLTK corpus tooling,
  // smoothing method1 (eps 1e-9), uniform 4-gram weights.
  const std::vector<std::string> fixture = {
      "a man in a red shirt is riding a bike down the street",
      "a man in a red shirt is walking a dog down the street",
      "a woman in a blue dress is riding a bike on the beach",
  };
  const double f = self_bleu(fixture, 4);
  c.expect(std::abs(f - 0.533087806102151) <= 1e-9, "fixture " + fmt(f));
  c.detail = "fixture " + std::to_string(f);
}

void flip_rate_checks(Check &c) {
  using Ann = FlipAnnotation;
  constexpr Label E = Label::kEntailment;
  constexpr Label N = Label::kNeutral;
  constexpr Label C = Label::kContradiction;
  const std::vector<Ann> hard = {Ann::make(E, C, C), Ann::make(E, N, N),
                                 Ann::make(N, C, C), Ann::make(C, E, N)};
  c.expect(flip_rate(hard) == 0.75, "flip rate fixture");
  const std::vector<Ann> soft = {Ann::make(E, C, C), Ann::make(N, E, E),
                                 Ann::make(C, N, C), Ann::make(E, N, C)};
  c.expect(soft_flip_rate(soft) == 0.75, "soft flip rate fixture");

  Rng rng(106);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<Ann> anns;
    const size_t n = 1 + testing::uniform_index(rng, 20);
    for (size_t i = 0; i < n; ++i) {
      const Label orig = testing::random_label(rng);
      const auto dirs = Direction::from(orig);
      const Label target = dirs[testing::uniform_index(rng, 2)].target();
      anns.push_back(Ann::make(orig, target, testing::random_label(rng)));
    }
    c.expect(flip_rate(anns) <= soft_flip_rate(anns),
             "ordering trial " + std::to_string(trial));
  }
  c.detail = "fixtures 0.75/0.75; 1000 random sets ordered";
}

// ---- filters ----

void filter_corpus(Check &c) {
  const HeuristicFilter filter(
      HeuristicContext::from_prompts(
          kDefaultMaskedTemplate,
          parse_icl_examples(cli::bundled_icl_examples(), "bundled")),
      {});
  int rejects = 0, rejects_ok = 0, controls = 0, controls_ok = 0;
  for (const auto &row : testing::load_filter_corpus()) {
    const auto got = filter.check(row.candidate);
    const std::string name =
        got ? std::string(reject_reason_name(*got)) : "accept";
    const bool ok = name == row.expected;
    if (row.expected == "accept") {
      ++controls;
      controls_ok += ok;
    } else {
      ++rejects;
      rejects_ok += ok;
    }
    c.expect(ok, row.candidate.id + " expected " + row.expected + " got " +
                     name);
  }
  c.expect(rejects == 30 && controls == 10, "corpus shape");
  c.detail = std::to_string(rejects_ok) + "/" + std::to_string(rejects) +
             " rejects, " + std::to_string(controls_ok) + "/" +
             std::to_string(controls) + " controls";
}

// ---- end to end ----

void end_to_end(Check &c) {
  testing::TempDir a, b;
  const int rc_a = testing::run_fixture_pipeline(a.path());
  const int rc_b = testing::run_fixture_pipeline(b.path());
  c.expect(rc_a == 0 && rc_b == 0, "pipeline exit codes " +
                                       std::to_string(rc_a) + "," +
                                       std::to_string(rc_b));
  const auto first = testing::snapshot(a / "out");
  const auto second = testing::snapshot(b / "out");
  c.expect(first == second, "two runs differ");

  const fs::path golden = CFDISTILL_GOLDEN_DIR;
  const auto expected =
      fs::exists(golden) ? testing::snapshot(golden)
                         : std::map<std::string, std::string>{};
  c.expect(!expected.empty(), "golden files missing");
  c.expect(first.size() == expected.size(), "file count differs from golden");
  for (const auto &[name, text] : expected) {
    auto it = first.find(name);
    c.expect(it != first.end() && it->second == text, name + " differs");
  }
  c.detail = std::to_string(first.size()) + " files";
}

// ---- prompts ----

size_t count(const std::string &s, const std::string &needle) {
  size_t n = 0;
  for (size_t pos = s.find(needle); pos != std::string::npos;
       pos = s.find(needle, pos + needle.size())) {
    ++n;
  }
  return n;
}

void prompt_reconstruction(Check &c) {
  Rng rng(107);
  const auto pool = parse_icl_examples(cli::bundled_icl_examples(), "bundled");
  int cases = 0;
  while (cases < 1000) {
    const NliExample e = testing::random_example(rng, "r");
    if (is_blank_or_punct(e.premise)) continue;
    const auto spans = extract_spans(e.premise);
    const Span &span = spans[testing::uniform_index(rng, spans.size())];
    const Direction d = Direction::from(e.label)[testing::uniform_index(rng, 2)];

    const auto ins = build_insertion_prompt(e, span, d);
    c.expect(ins.prefix + span.text + ins.suffix.substr(0, ins.suffix_marker) ==
                 e.premise,
             "insertion rebuild case " + std::to_string(cases));
    const auto icl = pick_icl_examples(pool, d.target(), cases % 5);
    const auto masked = build_masked_prompt(e, span, d, icl);
    c.expect(count(masked.prompt, "[blank]") == 1,
             "masked blank count case " + std::to_string(cases));
    ++cases;
  }
  c.detail = "1000 cases";
}

int run() {
  const std::vector<Criterion> criteria = {
      {"sensitivity_identities", 1.0, sensitivity_identities},
      {"teacher_delta", 1.0, teacher_delta_properties},
      {"ot_oracles", 30.0, ot_oracles},
      {"otdd_properties", 10.0, otdd_properties},
      {"self_bleu", 1.0, self_bleu_checks},
      {"flip_rates", 1.0, flip_rate_checks},
      {"filter_corpus", 1.0, filter_corpus},
      {"end_to_end", 10.0, end_to_end},
      {"prompt_reconstruction", 1.0, prompt_reconstruction},
  };
  int failed = 0;
  for (const Criterion &cr : criteria) {
    Check check;
    const auto start = std::chrono::steady_clock::now();
    try {
      cr.body(check);
    } catch (const std::exception &e) {
      check.expect(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start)
                            .count();
    check.expect(secs < cr.limit_s, "over time limit of " +
                                        fmt(cr.limit_s) + " s");
    const bool pass = check.failed == 0;
    failed += !pass;
    std::printf("%s %-22s %s (%.3f s)\n", pass ? "PASS" : "FAIL",
                cr.name.c_str(), check.detail.c_str(), secs);
    for (const std::string &f : check.failures) {
      std::printf("     %s\n", f.c_str());
    }
  }
  std::printf("%d/%zu criteria passed\n",
              static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}

}  // namespace
}  // namespace cfdistill

int main() { return cfdistill::run(); }
