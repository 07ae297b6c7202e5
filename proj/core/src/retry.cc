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

#include "cfdistill/retry.h"

#include <algorithm>
#include <cmath>
#include <ctime>
#include <thread>

#include "cfdistill/errors.h"

namespace cfdistill {

std::chrono::milliseconds RetryPolicy::delay_before_retry(int retry) const {
  if (retry < 1) return std::chrono::milliseconds(0);
  double seconds = base_delay_s * std::pow(factor, retry - 1);
  return std::chrono::milliseconds(static_cast<int64_t>(seconds * 1000.0));
}

void RetryPolicy::validate() const {
  if (max_attempts < 1) throw InputError("retry max_attempts must be >= 1");
  if (!(base_delay_s >= 0.0)) throw InputError("retry base delay must be >= 0");
  if (!(factor >= 1.0)) throw InputError("retry factor must be >= 1");
}

Sleeper real_sleeper() {
  return [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

TokenBucket::TokenBucket(double rate_per_s, double burst, Sleeper sleeper)
    : rate_(rate_per_s),
      burst_(std::max(1.0, burst)),
      tokens_(std::max(1.0, burst)),
      last_(Clock::now()),
      sleeper_(std::move(sleeper)) {}

void TokenBucket::acquire() {
  if (rate_ <= 0.0) return;
  while (true) {
    std::chrono::milliseconds wait{0};
    {
      std::lock_guard<std::mutex> lock(mu_);
      const auto now = Clock::now();
      const double elapsed =
          std::chrono::duration<double>(now - last_).count();
      last_ = now;
      tokens_ = std::min(burst_, tokens_ + elapsed * rate_);
      if (tokens_ >= 1.0) {
        tokens_ -= 1.0;
        return;
      }
      wait = std::chrono::milliseconds(
          static_cast<int64_t>(std::ceil((1.0 - tokens_) / rate_ * 1000.0)));
    }
    sleeper_(wait);
  }
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t secs = std::chrono::system_clock::to_time_t(now);
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      now.time_since_epoch())
                      .count() %
                  1000;
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%S", &tm);
  char out[40];
  std::snprintf(out, sizeof(out), "%s.%03dZ", buf, static_cast<int>(ms));
  return out;
}

}  // namespace cfdistill
