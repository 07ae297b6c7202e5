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

// Line-record dataset I/O. Every file holds one JSON object per line,
// "\n"-terminated, UTF-8. Field order on write is fixed:
//
//   id, premise, hypothesis, label [, spans] [, provenance]
//
// with labels spelled "entailment" / "neutral" / "contradiction", spans as
// [[start, end], ...] byte offsets into the premise, and provenance as
// {source_id, span_start, span_end, replacement, direction, mode, delta}.
// Probabilities and deltas are written with 6 decimal digits.

#ifndef CFDISTILL_DATASET_H_
#define CFDISTILL_DATASET_H_

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "cfdistill/types.h"

namespace cfdistill {

enum class DatasetKind {
  kNli,
  // NLI records that must also carry a valid provenance object.
  kDistilled,
};

// Reads examples in file order. Records without an id get
// "<file stem>#<0-based line index>". Records whose label is "-" (no gold
// label) are dropped and counted in the log. Blank lines are skipped.
//
// Throws DatasetError (with the 1-based line number) on malformed records
// or duplicate ids, and InputError when the file cannot be opened.
std::vector<NliExample> read_dataset(const std::filesystem::path &path,
                                     DatasetKind kind = DatasetKind::kNli);

// Writes one record per line. Two writes of the same input are
// byte-identical. Throws Error on I/O failure.
void write_dataset(std::span<const NliExample> examples,
                   const std::filesystem::path &path);

std::vector<DistilledExample> read_distilled(
    const std::filesystem::path &path);
void write_distilled(std::span<const DistilledExample> examples,
                     const std::filesystem::path &path);

std::vector<CandidatePerturbation> read_candidates(
    const std::filesystem::path &path);
void write_candidates(std::span<const CandidatePerturbation> candidates,
                      const std::filesystem::path &path);

// Single-record serializers (no trailing newline).
std::string serialize_record(const NliExample &example);
std::string serialize_record(const DistilledExample &example);
std::string serialize_record(const CandidatePerturbation &candidate);

// Rounds to 6 decimal digits and clears negative zero.
double quantize6(double value);

// Writes `lines` to `path`, one per line. Throws Error on I/O failure.
void write_lines(const std::vector<std::string> &lines,
                 const std::filesystem::path &path);

}  // namespace cfdistill

#endif  // CFDISTILL_DATASET_H_
