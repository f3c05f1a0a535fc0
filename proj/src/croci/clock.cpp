#include "croci/clock.hpp"

#include <algorithm>
#include <thread>

namespace croci {

Clock::TimePoint SystemClock::now() {
  return std::chrono::time_point_cast<Duration>(std::chrono::steady_clock::now());
}

void SystemClock::sleep_for(Duration d) { std::this_thread::sleep_for(d); }

Clock::TimePoint ManualClock::now() {
  std::lock_guard lock(mutex_);
  return now_;
}

void ManualClock::sleep_for(Duration d) {
  std::lock_guard lock(mutex_);
  now_ += d;
}

TokenBucket::TokenBucket(Clock& clock, double rate_per_second, double burst)
    : clock_(clock),
      rate_(rate_per_second),
      capacity_(std::max(1.0, burst)),
      tokens_(std::max(1.0, burst)),
      last_(clock.now()) {}

void TokenBucket::acquire() {
  if (rate_ <= 0) return;  // unthrottled
  // Holding the lock while sleeping keeps waiters strictly ordered.
  std::lock_guard lock(mutex_);
  for (;;) {
    auto now = clock_.now();
    double elapsed = std::chrono::duration<double>(now - last_).count();
    tokens_ = std::min(capacity_, tokens_ + elapsed * rate_);
    last_ = now;
    if (tokens_ >= 1.0) {
      tokens_ -= 1.0;
      return;
    }
    double wait = (1.0 - tokens_) / rate_;
    clock_.sleep_for(std::chrono::ceil<Clock::Duration>(
        std::chrono::duration<double>(wait)));
  }
}

}  // namespace croci
