#pragma once

#include <mutex>
#include <random>

#include "domainscope/backend.hpp"
#include "domainscope/clock.hpp"

namespace domainscope {

/// Backoff policy for retryable backend errors. The jitter stream is the
/// only randomness in the tool and is seeded from configuration.
struct RetryPolicy {
  int attempts = 3;
  double base_delay = 0.5;  // seconds; grows linearly per attempt
  std::uint64_t seed = 0;
};

namespace retry_detail {

class Backoff {
 public:
  Backoff(RetryPolicy policy, Clock clock)
      : policy_(policy), clock_(std::move(clock)), rng_(policy.seed) {}

  template <typename F>
  auto run(F&& f) {
    for (int attempt = 1;; ++attempt) {
      try {
        return f();
      } catch (const BackendUnavailable&) {
        if (attempt >= policy_.attempts) throw;
        wait(attempt, 1.0);
      } catch (const QuotaExhausted&) {
        if (attempt >= policy_.attempts) throw;
        wait(attempt, 4.0);  // quota exhaustion asks for a longer pause
      }
    }
  }

 private:
  void wait(int attempt, double scale) {
    double jitter;
    {
      std::lock_guard lock(mutex_);
      jitter = dist_(rng_);
    }
    clock_.sleep_for(policy_.base_delay * attempt * scale * (1.0 + jitter));
  }

  RetryPolicy policy_;
  Clock clock_;
  std::mutex mutex_;
  std::mt19937_64 rng_;
  std::uniform_real_distribution<double> dist_{0.0, 1.0};
};

}  // namespace retry_detail

class RetryingSearchBackend : public SearchBackend {
 public:
  RetryingSearchBackend(SearchBackend& inner, RetryPolicy policy,
                        Clock clock = Clock::system())
      : inner_(inner), backoff_(policy, std::move(clock)) {}

  HitCount hit_count(const HitCountQuery& q) override {
    return backoff_.run([&] { return inner_.hit_count(q); });
  }
  std::string id() const override { return inner_.id(); }
  bool rounds() const override { return inner_.rounds(); }
  std::size_t max_query_length() const override {
    return inner_.max_query_length();
  }

 private:
  SearchBackend& inner_;
  retry_detail::Backoff backoff_;
};

class RetryingImpactBackend : public ImpactBackend {
 public:
  RetryingImpactBackend(ImpactBackend& inner, RetryPolicy policy,
                        Clock clock = Clock::system())
      : inner_(inner), backoff_(policy, std::move(clock)) {}

  ImpactSnapshot impact(const std::string& host) override {
    return backoff_.run([&] { return inner_.impact(host); });
  }
  std::string id() const override { return inner_.id(); }

 private:
  ImpactBackend& inner_;
  retry_detail::Backoff backoff_;
};

}  // namespace domainscope
