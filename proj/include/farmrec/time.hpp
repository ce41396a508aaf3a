// Copyright (c) The farmrec Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not use this file except
// in compliance with the License.  You may obtain a copy of the License at
//
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the License
// is distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express
// or implied.  See the License for the specific language governing permissions and limitations
// under the License.
//

#pragma once

#include <atomic>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace farmrec {

// Calendar date, timezone-naive. Stored as days since 1970-01-01.
struct Date {
  std::int32_t days = 0;

  static std::optional<Date> from_ymd(int year, int month, int day);
  int year() const;
  int month() const;
  int day() const;

  friend auto operator<=>(const Date&, const Date&) = default;
};

// Timezone-naive wall-clock instant with second precision.
struct Timestamp {
  std::int64_t seconds = 0;

  static std::optional<Timestamp> from_civil(int year, int month, int day, int hour, int minute,
                                             int second = 0);
  Date date() const;
  int hour() const;
  int minute() const;
  int second() const;

  friend auto operator<=>(const Timestamp&, const Timestamp&) = default;
};

// Accepts ISO "yyyy-mm-dd" and US "mm/dd/yyyy" (one- or two-digit month and day).
std::optional<Date> parse_date(std::string_view text);

// Accepts ISO "yyyy-mm-ddThh:mm[:ss]" (space also allowed as separator) and the US form
// "m/d/yyyy h:mm[:ss]am" with am/pm in either case, optionally separated by a space.
std::optional<Timestamp> parse_timestamp(std::string_view text);

// strftime-style subset: %Y %m %d %H %M %S %I %p (AM/PM) %P (am/pm) %%, and %-m %-d %-H %-I
// for unpadded numbers. Unknown directives are copied through verbatim.
std::string format_date(Date date, std::string_view pattern);
std::string format_timestamp(Timestamp ts, std::string_view pattern);

inline constexpr std::string_view kIsoDatePattern = "%Y-%m-%d";
inline constexpr std::string_view kIsoTimestampPattern = "%Y-%m-%dT%H:%M:%S";

std::string to_iso(Date date);
std::string to_iso(Timestamp ts);

class Clock {
 public:
  virtual ~Clock() = default;
  virtual Timestamp now() const = 0;
};

class SystemClock final : public Clock {
 public:
  Timestamp now() const override;
};

// Settable clock for demos and tests.
class ManualClock final : public Clock {
 public:
  explicit ManualClock(Timestamp start = {}) : seconds_(start.seconds) {}
  Timestamp now() const override { return Timestamp{seconds_.load()}; }
  void set(Timestamp ts) { seconds_.store(ts.seconds); }
  void advance(std::int64_t seconds) { seconds_.fetch_add(seconds); }

 private:
  std::atomic<std::int64_t> seconds_;
};

}  // namespace farmrec
