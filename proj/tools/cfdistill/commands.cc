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


#include "commands.h"

#include <algorithm>
#include <fstream>
#include <mutex>
#include <optional>
#include <set>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "cfdistill/augment.h"
#include "cfdistill/dataset.h"
#include "cfdistill/http_backend.h"
#include "cfdistill/parallel.h"
#include "cfdistill/text.h"
#include "stage.h"

namespace cfdistill::cli {
namespace {

using nlohmann::ordered_json;

std::unique_ptr<GenerationBackend> make_backend(const BackendConfig &config) {
  if (config.endpoint.kind == "mock") {
    if (config.lexicon.empty()) return std::make_unique<MockBackend>();
    return std::make_unique<MockBackend>(
        MockBackend::from_file(require_input(config.lexicon, "backend.lexicon")));
  }
  HttpBackendOptions options;
  options.client = config.endpoint.client_options();
  options.model = config.model;
  return std::make_unique<HttpBackend>(std::move(options));
}

std::vector<IclExample> load_icl_pool(const GenerateConfig &config) {
  if (config.icl_path.empty()) {
    return parse_icl_examples(bundled_icl_examples(), "<bundled icl examples>");
  }
  return read_icl_examples(require_input(config.icl_path, "--icl-examples"));
}

std::string load_masked_template(const GenerateConfig &config) {
  if (config.template_path.empty()) return std::string(kDefaultMaskedTemplate);
  return load_template(require_input(config.template_path, "--template"));
}

std::vector<std::string> log_lines(const std::vector<RequestLogEntry> &log) {
  std::vector<std::string> lines;
  lines.reserve(log.size());
  for (const auto &e : log) lines.push_back(e.to_line());
  return lines;
}

std::vector<std::string> split_list(const std::string &text) {
  std::vector<std::string> out;
  size_t start = 0;
  while (start <= text.size()) {
    size_t end = text.find(',', start);
    if (end == std::string::npos) end = text.size();
    std::string item(trim(std::string_view(text).substr(start, end - start)));
    if (!item.empty()) out.push_back(std::move(item));
    start = end + 1;
  }
  return out;
}

void ensure_logger() {
  static std::once_flag once;
  std::call_once(once, [] {
    auto logger = spdlog::stderr_logger_mt("cfdistill");
    logger->set_pattern("[%l] %v");
    spdlog::set_default_logger(logger);
    spdlog::set_level(spdlog::level::warn);
  });
}

}  // namespace

Stage::Stage(const RunConfig &config) : dir_(config.out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) {
    throw InputError("cannot create output directory " + dir_.string() + ": " +
                     ec.message());
  }
  write_json("config.json", to_json(config));
  write_lines({}, path("requests.log"));
}

void Stage::write_json(const std::string &name,
                       const nlohmann::ordered_json &j) const {
  write_lines({j.dump(2)}, path(name));
}

void Stage::write_partial(const std::string &name,
                          const std::vector<std::string> &lines) const {
  write_lines(lines, path(name + ".partial"));
}

std::filesystem::path require_input(const std::string &path,
                                    const std::string &flag) {
  if (path.empty()) throw InputError("missing required input " + flag);
  std::filesystem::path p(path);
  std::error_code ec;
  if (!std::filesystem::is_regular_file(p, ec)) {
    throw InputError("input file not found: " + path);
  }
  return p;
}

std::unique_ptr<Scorer> make_scorer(const ScorerConfig &config) {
  if (config.endpoint.kind == "mock") {
    if (config.overrides.empty()) return std::make_unique<MockScorer>();
    return std::make_unique<MockScorer>(MockScorer::from_file(
        require_input(config.overrides, "scorer.overrides")));
  }
  HttpScorerOptions options;
  options.client = config.endpoint.client_options();
  options.max_batch = config.max_batch;
  auto scorer = std::make_unique<HttpScorer>(std::move(options));
  if (!scorer->healthy()) {
    throw FatalBackendError("scorer unreachable at " + config.endpoint.base_url);
  }
  return scorer;
}

void cmd_select(const RunConfig &config, std::ostream &out) {
  const auto input = require_input(config.paths.input, "--input");
  const auto stats_path = require_input(config.paths.stats, "--stats");
  const auto dataset = read_dataset(input);
  const auto stats = read_cartography_stats(stats_path);
  Stage stage(config);
  const auto selected = select_ambiguous(dataset, stats, config.select_fraction);
  write_dataset(selected, stage.path("selected.jsonl"));
  ordered_json summary;
  summary["input"] = dataset.size();
  summary["selected"] = selected.size();
  summary["fraction"] = config.select_fraction;
  stage.write_json("summary.json", summary);
  out << "selected " << selected.size() << " of " << dataset.size()
      << " examples\n";
}

void cmd_generate(const RunConfig &config, std::ostream &out) {
  const auto input = require_input(config.paths.input, "--input");
  const auto examples = read_dataset(input);
  const GenerateConfig &gen = config.generate;

  OvergenerateOptions options;
  if (gen.mode == PromptMode::kMasked) {
    options.masked_template = load_masked_template(gen);
    validate_template(options.masked_template);
    options.icl_pool = load_icl_pool(gen);
    options.icl_count = gen.icl_count;
  }
  GenerationParams params = gen.params;
  if (config.backend.endpoint.kind == "mock") params.seed = config.seed;
  auto backend = make_backend(config.backend);

  std::set<std::string> wanted(gen.directions.begin(), gen.directions.end());
  Stage stage(config);

  // One slot per example, filled in place so a fatal error keeps whatever
  // was produced before it.
  std::vector<OvergenerateResult> results(examples.size());
  try {
    parallel_for(examples.size(), gen.workers, [&](size_t i) {
      const NliExample &ex = examples[i];
      const auto spans = extract_spans(ex, config.chunker);
      for (Direction d : Direction::from(ex.label)) {
        if (!wanted.empty() && !wanted.count(d.short_name())) continue;
        overgenerate_into(ex, spans, d, gen.mode, params, *backend, options,
                          results[i]);
      }
    });
  } catch (const FatalBackendError &) {
    std::vector<std::string> candidates, log;
    for (const auto &r : results) {
      for (const auto &c : r.candidates) candidates.push_back(serialize_record(c));
      for (const auto &line : log_lines(r.log)) log.push_back(line);
    }
    stage.write_partial("candidates.jsonl", candidates);
    stage.write_partial("requests.log", log);
    throw;
  }

  std::vector<CandidatePerturbation> candidates;
  std::vector<RequestLogEntry> log;
  size_t requests = 0, failed = 0;
  for (auto &r : results) {
    std::move(r.candidates.begin(), r.candidates.end(),
              std::back_inserter(candidates));
    std::move(r.log.begin(), r.log.end(), std::back_inserter(log));
    requests += r.requests;
    failed += r.failed_requests;
  }
  write_candidates(candidates, stage.path("candidates.jsonl"));
  write_lines(log_lines(log), stage.path("requests.log"));

  ordered_json summary;
  summary["examples"] = examples.size();
  summary["requests"] = requests;
  summary["failed_requests"] = failed;
  summary["candidates"] = candidates.size();
  stage.write_json("summary.json", summary);
  out << "generated " << candidates.size() << " candidates from " << requests
      << " requests (" << failed << " failed)\n";
}

void cmd_filter(const RunConfig &config, std::ostream &out) {
  const auto input = require_input(config.paths.candidates, "--candidates");
  const auto candidates = read_candidates(input);
  const FilterConfig &fc = config.filter;
  std::unique_ptr<Scorer> scorer;
  if (fc.teacher) scorer = make_scorer(config.scorer);
  Stage stage(config);

  // Per-candidate outcome: a rejection record or an accepted example.
  std::vector<std::optional<ordered_json>> rejections(candidates.size());
  std::vector<std::optional<DistilledExample>> accepted(candidates.size());
  std::map<std::string, size_t> heuristic_counts, teacher_counts;
  for (RejectReason r : kAllRejectReasons) {
    heuristic_counts[std::string(reject_reason_name(r))] = 0;
  }
  teacher_counts = {{"below_threshold", 0},
                    {"argmax_mismatch", 0},
                    {"scoring_failed", 0}};
  auto reject = [&](size_t i, const char *stage_name, std::string reason,
                    std::optional<double> delta) {
    ordered_json j;
    j["candidate_id"] = candidates[i].id;
    j["stage"] = stage_name;
    j["reason"] = reason;
    if (delta) j["delta"] = quantize6(*delta);
    rejections[i] = std::move(j);
  };

  std::vector<size_t> survivors;
  if (fc.heuristic) {
    const GenerateConfig &gen = config.generate;
    const auto icl = load_icl_pool(gen);
    const HeuristicFilter filter(
        HeuristicContext::from_prompts(load_masked_template(gen), icl),
        fc.heuristic_config);
    for (size_t i = 0; i < candidates.size(); ++i) {
      if (auto reason = filter.check(candidates[i])) {
        const std::string name(reject_reason_name(*reason));
        ++heuristic_counts[name];
        reject(i, "heuristic", name, std::nullopt);
      } else {
        survivors.push_back(i);
      }
    }
  } else {
    for (size_t i = 0; i < candidates.size(); ++i) survivors.push_back(i);
  }

  auto flush = [&](bool partial) {
    std::vector<std::string> distilled_lines, rejection_lines;
    for (size_t i = 0; i < candidates.size(); ++i) {
      if (accepted[i]) distilled_lines.push_back(serialize_record(*accepted[i]));
      if (rejections[i]) rejection_lines.push_back(rejections[i]->dump());
    }
    if (partial) {
      stage.write_partial("distilled.jsonl", distilled_lines);
      stage.write_partial("rejections.jsonl", rejection_lines);
    } else {
      write_lines(distilled_lines, stage.path("distilled.jsonl"));
      write_lines(rejection_lines, stage.path("rejections.jsonl"));
    }
  };

  if (fc.teacher) {
    std::vector<CandidatePerturbation> batch;
    batch.reserve(survivors.size());
    for (size_t i : survivors) batch.push_back(candidates[i]);
    TeacherBatchResult result;
    try {
      result = teacher_filter_batch(batch, *scorer, fc.teacher_config);
    } catch (const FatalBackendError &) {
      flush(true);
      throw;
    }
    for (size_t k = 0; k < survivors.size(); ++k) {
      const size_t i = survivors[k];
      const auto &v = result.verdicts[k];
      if (!v) {
        ++teacher_counts["scoring_failed"];
        reject(i, "teacher", "scoring_failed", std::nullopt);
      } else if (v->accepted) {
        accepted[i] = v->accepted;
      } else {
        const std::string name(teacher_reject_reason_name(*v->reason));
        ++teacher_counts[name];
        reject(i, "teacher", name, v->score.delta);
      }
    }
  } else {
    for (size_t i : survivors) {
      const auto &c = candidates[i];
      DistilledExample d;
      d.id = c.id;
      d.new_premise = c.new_premise;
      d.hypothesis = c.hypothesis;
      d.new_label = c.direction.target();
      d.provenance = {c.example_id, c.span.start, c.span.end, c.replacement,
                      c.direction,  c.mode,       0.0};
      accepted[i] = std::move(d);
    }
  }
  flush(false);

  size_t n_accepted = 0;
  for (const auto &a : accepted) n_accepted += a.has_value();
  ordered_json summary;
  summary["candidates"] = candidates.size();
  summary["heuristic"] = heuristic_counts;
  summary["teacher"] = teacher_counts;
  summary["accepted"] = n_accepted;
  stage.write_json("summary.json", summary);

  out << "candidates " << candidates.size() << ", accepted " << n_accepted
      << "\n";
  for (RejectReason r : kAllRejectReasons) {
    const std::string name(reject_reason_name(r));
    out << "  heuristic " << name << ": " << heuristic_counts[name] << "\n";
  }
  for (const auto &[name, count] : teacher_counts) {
    out << "  teacher " << name << ": " << count << "\n";
  }
}

void cmd_augment(const RunConfig &config, std::ostream &out) {
  const auto base = read_dataset(require_input(config.paths.base, "--base"));
  std::vector<NliExample> subset, counterfactuals;
  if (!config.paths.subset.empty()) {
    subset = read_dataset(require_input(config.paths.subset, "--subset"));
  }
  if (!config.paths.counterfactuals.empty()) {
    counterfactuals = read_dataset(
        require_input(config.paths.counterfactuals, "--counterfactuals"));
  }
  Stage stage(config);
  const AugmentResult result = build_augmented(base, subset, counterfactuals);
  write_dataset(result.output, stage.path("train.jsonl"));
  ordered_json summary;
  summary["base"] = base.size();
  summary["subset"] = subset.size();
  summary["counterfactuals"] = counterfactuals.size();
  summary["inputs"] = result.inputs;
  summary["output"] = result.output.size();
  summary["duplicates_removed"] = result.duplicates_removed;
  summary["ids_renamed"] = result.ids_renamed;
  stage.write_json("summary.json", summary);
  out << "training set " << result.output.size() << " examples ("
      << result.duplicates_removed << " duplicates removed)\n";
}

int run(const std::vector<std::string> &args, std::ostream &out,
        std::ostream &err) {
  ensure_logger();
  CLI::App app{"Counterfactual NLI data distillation pipeline", "cfdistill"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  uint64_t seed = 0;
  std::string out_dir;
  std::string log_level = "warn";
  auto *seed_opt = app.add_option("--seed", seed, "Seed for mock backends");
  auto *out_opt = app.add_option("--out-dir", out_dir, "Output directory");
  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--log-level", log_level, "trace|debug|info|warn|error|off");

  // String-valued overrides, keyed by flag. Applied after the config file.
  std::map<std::string, std::string> flags;
  std::set<std::string> switches;
  auto opt = [&](CLI::App *cmd, const std::string &name,
                 const std::string &help) {
    cmd->add_option("--" + name, flags[cmd->get_name() + "." + name], help);
  };
  auto sw = [&](CLI::App *cmd, const std::string &name,
                const std::string &help) {
    cmd->add_flag_callback(
        "--" + name,
        [&switches, key = cmd->get_name() + "." + name] {
          switches.insert(key);
        },
        help);
  };

  auto *select = app.add_subcommand("select", "Pick the most ambiguous subset");
  opt(select, "input", "Dataset file");
  opt(select, "stats", "Cartography statistics file");
  opt(select, "fraction", "Fraction of examples to keep");

  auto *generate = app.add_subcommand("generate", "Overgenerate perturbations");
  opt(generate, "input", "Dataset file");
  opt(generate, "mode", "masked|insertion");
  opt(generate, "directions", "Comma-separated directions, e.g. E2C,N2E");
  opt(generate, "backend", "mock|http");
  opt(generate, "base-url", "Generation service base URL");
  opt(generate, "model", "Model name sent to the service");
  opt(generate, "n-samples", "Completions per request");
  opt(generate, "workers", "Examples processed in parallel");
  opt(generate, "icl-examples", "Demonstration file for masked mode");
  opt(generate, "template", "Masked prompt template file");

  auto *filter = app.add_subcommand("filter", "Heuristic and teacher filtering");
  opt(filter, "candidates", "Candidates file from generate");
  opt(filter, "scorer", "mock|http");
  opt(filter, "scorer-url", "Scorer service base URL");
  opt(filter, "threshold", "Minimum probability shift");
  opt(filter, "overrides", "Mock scorer override table");
  sw(filter, "no-argmax", "Do not require the target to be the top label");
  sw(filter, "skip-heuristic", "Skip the heuristic stage");
  sw(filter, "skip-teacher", "Skip the teacher stage");

  auto *augment = app.add_subcommand("augment", "Build the training set");
  opt(augment, "base", "Base dataset");
  opt(augment, "subset", "Selected subset");
  opt(augment, "counterfactuals", "Distilled counterfactuals");

  auto *eval = app.add_subcommand("eval", "Compute metrics");
  opt(eval, "metrics",
      "Comma-separated subset of flip-rate,self-bleu,otdd,sensitivity,"
      "cf-accuracy");
  opt(eval, "original", "Original dataset");
  opt(eval, "counterfactuals", "Distilled counterfactuals");
  opt(eval, "annotations", "Flip annotations");
  opt(eval, "pairs", "Counterfactual pairs");
  opt(eval, "max-n", "Self-BLEU maximum n-gram order");
  opt(eval, "scorer", "mock|http");
  opt(eval, "scorer-url", "Scorer service base URL");
  opt(eval, "overrides", "Mock scorer override table");

  std::vector<const char *> argv;
  argv.reserve(args.size());
  for (const auto &a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    auto level = spdlog::level::from_str(log_level);
    spdlog::set_level(level);

    RunConfig config =
        config_path.empty() ? RunConfig() : load_config(config_path);
    if (seed_opt->count()) config.seed = seed;
    if (out_opt->count()) config.out_dir = out_dir;

    const std::string command = app.get_subcommands().front()->get_name();
    auto given = [&](const std::string &name) -> const std::string * {
      auto it = flags.find(command + "." + name);
      if (it == flags.end()) return nullptr;
      auto *o = app.get_subcommand(command)->get_option("--" + name);
      return o->count() ? &it->second : nullptr;
    };
    auto number = [&](const std::string &name, auto &target) {
      if (const std::string *v = given(name)) {
        try {
          size_t used = 0;
          const double d = std::stod(*v, &used);
          if (used != v->size()) throw std::invalid_argument(*v);
          using T = std::decay_t<decltype(target)>;
          if constexpr (std::is_integral_v<T>) {
            if (d < 0 || d != static_cast<double>(static_cast<int64_t>(d))) {
              throw std::invalid_argument(*v);
            }
          }
          target = static_cast<std::decay_t<decltype(target)>>(d);
        } catch (const std::logic_error &) {
          throw InputError("--" + name + " expects a number, got \"" + *v +
                           "\"");
        }
      }
    };
    auto text = [&](const std::string &name, std::string &target) {
      if (const std::string *v = given(name)) target = *v;
    };
    auto on = [&](const std::string &name) {
      return switches.count(command + "." + name) > 0;
    };

    PathsConfig &paths = config.paths;
    if (command == "select") {
      text("input", paths.input);
      text("stats", paths.stats);
      number("fraction", config.select_fraction);
    } else if (command == "generate") {
      text("input", paths.input);
      if (const std::string *v = given("mode")) {
        auto mode = prompt_mode_from_name(*v);
        if (!mode) throw InputError("--mode must be masked or insertion");
        config.generate.mode = *mode;
      }
      if (const std::string *v = given("directions")) {
        config.generate.directions = split_list(*v);
      }
      text("backend", config.backend.endpoint.kind);
      text("base-url", config.backend.endpoint.base_url);
      text("model", config.backend.model);
      number("n-samples", config.generate.params.n_samples);
      number("workers", config.generate.workers);
      text("icl-examples", config.generate.icl_path);
      text("template", config.generate.template_path);
    } else if (command == "filter") {
      text("candidates", paths.candidates);
      text("scorer", config.scorer.endpoint.kind);
      text("scorer-url", config.scorer.endpoint.base_url);
      number("threshold", config.filter.teacher_config.threshold);
      text("overrides", config.scorer.overrides);
      if (on("no-argmax")) config.filter.teacher_config.require_argmax = false;
      if (on("skip-heuristic")) config.filter.heuristic = false;
      if (on("skip-teacher")) config.filter.teacher = false;
    } else if (command == "augment") {
      text("base", paths.base);
      text("subset", paths.subset);
      text("counterfactuals", paths.counterfactuals);
    } else if (command == "eval") {
      if (const std::string *v = given("metrics")) {
        config.eval.metrics = split_list(*v);
      }
      text("original", paths.original);
      text("counterfactuals", paths.counterfactuals);
      text("annotations", paths.annotations);
      text("pairs", paths.pairs);
      number("max-n", config.eval.max_n);
      text("scorer", config.scorer.endpoint.kind);
      text("scorer-url", config.scorer.endpoint.base_url);
      text("overrides", config.scorer.overrides);
    }
    config.validate();

    if (command == "select") cmd_select(config, out);
    if (command == "generate") cmd_generate(config, out);
    if (command == "filter") cmd_filter(config, out);
    if (command == "augment") cmd_augment(config, out);
    if (command == "eval") cmd_eval(config, out);
    return kExitOk;
  } catch (const FatalBackendError &e) {
    err << "fatal: " << e.what() << "\n";
    return kExitFatal;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
}

}  // namespace cfdistill::cli
