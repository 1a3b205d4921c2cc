#pragma once

#include <mutex>

#include "domainscope/backend.hpp"
#include "domainscope/clock.hpp"

namespace domainscope {

/// Token-free pacing limiter: request i may not start before (i-1)/rate
/// seconds after request 0. Shared per backend, global across workers.
class RateLimiter {
 public:
  RateLimiter(double per_second, Clock clock = Clock::system())
      : interval_(per_second > 0 ? 1.0 / per_second : 0.0),
        clock_(std::move(clock)) {}

  void acquire() {
    if (interval_ <= 0) return;
    double wait = 0;
    {
      std::lock_guard lock(mutex_);
      double now = clock_.now();
      double start = next_allowed_ > now ? next_allowed_ : now;
      wait = start - now;
      next_allowed_ = start + interval_;
    }
    if (wait > 0) clock_.sleep_for(wait);
  }

 private:
  double interval_;
  Clock clock_;
  std::mutex mutex_;
  double next_allowed_ = 0;
};

/// Search backend decorator that paces every call through one limiter.
class RateLimitedSearchBackend : public SearchBackend {
 public:
  RateLimitedSearchBackend(SearchBackend& inner, RateLimiter& limiter)
      : inner_(inner), limiter_(limiter) {}

  HitCount hit_count(const HitCountQuery& q) override {
    limiter_.acquire();
    return inner_.hit_count(q);
  }
  std::string id() const override { return inner_.id(); }
  bool rounds() const override { return inner_.rounds(); }
  std::size_t max_query_length() const override {
    return inner_.max_query_length();
  }

 private:
  SearchBackend& inner_;
  RateLimiter& limiter_;
};

}  // namespace domainscope
