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

#ifndef CFDISTILL_RETRY_H_
#define CFDISTILL_RETRY_H_

#include <chrono>
#include <functional>
#include <mutex>
#include <string>

namespace cfdistill {

// Exponential backoff: the k-th retry (k = 1, 2, ...) waits
// base_delay_s * factor^(k-1) seconds.
struct RetryPolicy {
  int max_attempts = 5;
  double base_delay_s = 1.0;
  double factor = 2.0;

  std::chrono::milliseconds delay_before_retry(int retry) const;
  void validate() const;
};

using Sleeper = std::function<void(std::chrono::milliseconds)>;

// std::this_thread::sleep_for.
Sleeper real_sleeper();

// Token bucket limiting request starts to `rate_per_s` with bursts of up
// to `burst` requests. A non-positive rate disables limiting.
class TokenBucket {
 public:
  TokenBucket(double rate_per_s, double burst, Sleeper sleeper = real_sleeper());

  // Blocks until a token is available.
  void acquire();

 private:
  using Clock = std::chrono::steady_clock;

  double rate_;
  double burst_;
  double tokens_;
  Clock::time_point last_;
  Sleeper sleeper_;
  std::mutex mu_;
};

// Current UTC time as "YYYY-MM-DDTHH:MM:SS.mmmZ".
std::string utc_timestamp();

}  // namespace cfdistill

#endif  // CFDISTILL_RETRY_H_
