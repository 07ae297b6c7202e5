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

#ifndef CFDISTILL_ERRORS_H_
#define CFDISTILL_ERRORS_H_

#include <stdexcept>
#include <string>
#include <vector>

namespace cfdistill {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid user input: malformed records, bad configuration, contract
// violations on arguments. The CLI maps these to exit code 1.
class InputError : public Error {
 public:
  using Error::Error;
};

// A malformed record in a line-oriented dataset file. `line` is 1-based.
class DatasetError : public InputError {
 public:
  DatasetError(const std::string &path, size_t line, const std::string &what)
      : InputError(path + ":" + std::to_string(line) + ": " + what),
        line_(line) {}

  size_t line() const { return line_; }

 private:
  size_t line_;
};

// One HTTP attempt against a backend, kept for the request log.
struct AttemptRecord {
  std::string timestamp;
  int attempt = 0;
  // HTTP status, or 0 when no response was received.
  int status = 0;
};

// A remote call failed after exhausting its retry budget, or failed with a
// non-retryable client error. Callers may skip the affected item.
class TransportError : public Error {
 public:
  TransportError(const std::string &what, std::vector<AttemptRecord> attempts)
      : Error(what), attempts_(std::move(attempts)) {}

  const std::vector<AttemptRecord> &attempts() const { return attempts_; }

 private:
  std::vector<AttemptRecord> attempts_;
};

// Authentication, quota or reachability failures that must abort the whole
// run. The CLI maps these to exit code 2.
class FatalBackendError : public Error {
 public:
  FatalBackendError(const std::string &what,
                    std::vector<AttemptRecord> attempts = {})
      : Error(what), attempts_(std::move(attempts)) {}

  const std::vector<AttemptRecord> &attempts() const { return attempts_; }

 private:
  std::vector<AttemptRecord> attempts_;
};

}  // namespace cfdistill

#endif  // CFDISTILL_ERRORS_H_
