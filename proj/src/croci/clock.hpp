#pragma once

#include <chrono>
#include <mutex>

namespace croci {

class Clock {
 public:
  using Duration = std::chrono::nanoseconds;
  using TimePoint = std::chrono::time_point<std::chrono::steady_clock, Duration>;

  virtual ~Clock() = default;
  virtual TimePoint now() = 0;
  virtual void sleep_for(Duration d) = 0;
};

class SystemClock final : public Clock {
 public:
  TimePoint now() override;
  void sleep_for(Duration d) override;
};

/// Test clock: sleeping advances time instantly.
class ManualClock final : public Clock {
 public:
  TimePoint now() override;
  void sleep_for(Duration d) override;
  void advance(Duration d) { sleep_for(d); }

 private:
  std::mutex mutex_;
  TimePoint now_{};
};

/// Token bucket limiting callers to `rate_per_second`, at most `burst`
/// requests back to back. acquire() blocks on the clock until a token is free.
class TokenBucket {
 public:
  TokenBucket(Clock& clock, double rate_per_second, double burst = 1.0);

  void acquire();

 private:
  Clock& clock_;
  double rate_;
  double capacity_;
  double tokens_;
  Clock::TimePoint last_;
  std::mutex mutex_;
};

}  // namespace croci
