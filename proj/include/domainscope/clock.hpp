#pragma once

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <string>
#include <thread>

#include "domainscope/errors.hpp"

namespace domainscope {

/// Injectable time source. Everything that waits or timestamps goes through
/// one of these so tests can drive a virtual clock.
struct Clock {
  std::function<double()> now;             // seconds since epoch
  std::function<void(double)> sleep_for;   // seconds

  static Clock system() {
    return Clock{
        [] {
          return std::chrono::duration<double>(
                     std::chrono::system_clock::now().time_since_epoch())
              .count();
        },
        [](double seconds) {
          if (seconds > 0)
            std::this_thread::sleep_for(std::chrono::duration<double>(seconds));
        }};
  }
};

inline std::string to_iso8601(std::int64_t epoch_seconds) {
  std::int64_t days = epoch_seconds / 86400;
  std::int64_t rem = epoch_seconds % 86400;
  if (rem < 0) {
    rem += 86400;
    days -= 1;
  }
  // civil-from-days (Howard Hinnant's algorithm)
  days += 719468;
  const std::int64_t era = (days >= 0 ? days : days - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(days - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp < 10 ? mp + 3 : mp - 9;
  const std::int64_t year = y + (m <= 2);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02uT%02lld:%02lld:%02lldZ",
                static_cast<long long>(year), m, d,
                static_cast<long long>(rem / 3600),
                static_cast<long long>((rem / 60) % 60),
                static_cast<long long>(rem % 60));
  return buf;
}

inline std::int64_t from_iso8601(const std::string& s) {
  int year, mon, day, hh, mm, ss;
  if (std::sscanf(s.c_str(), "%d-%d-%dT%d:%d:%d", &year, &mon, &day, &hh, &mm,
                  &ss) != 6)
    throw ParseError("bad ISO-8601 timestamp: " + s);
  // days-from-civil
  const std::int64_t y = year - (mon <= 2);
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy =
      (153 * (mon > 2 ? mon - 3 : mon + 9) + 2) / 5 + day - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  const std::int64_t days = era * 146097 + static_cast<std::int64_t>(doe) - 719468;
  return days * 86400 + hh * 3600 + mm * 60 + ss;
}

}  // namespace domainscope
