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

#include "farmrec/time.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>

namespace farmrec {

namespace {

using std::chrono::day;
using std::chrono::days;
using std::chrono::month;
using std::chrono::sys_days;
using std::chrono::year;
using std::chrono::year_month_day;

constexpr std::int64_t kSecondsPerDay = 86400;

year_month_day civil(std::int32_t days_since_epoch) {
  return year_month_day{sys_days{days{days_since_epoch}}};
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  auto q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// Parses exactly [min_digits, max_digits] ASCII digits at text[pos].
std::optional<int> take_number(std::string_view text, std::size_t& pos, int min_digits,
                               int max_digits) {
  std::size_t start = pos;
  while (pos < text.size() && pos - start < static_cast<std::size_t>(max_digits) &&
         text[pos] >= '0' && text[pos] <= '9') {
    ++pos;
  }
  if (pos - start < static_cast<std::size_t>(min_digits)) return std::nullopt;
  int value = 0;
  std::from_chars(text.data() + start, text.data() + pos, value);
  return value;
}

bool take_char(std::string_view text, std::size_t& pos, char c) {
  if (pos < text.size() && text[pos] == c) {
    ++pos;
    return true;
  }
  return false;
}

std::optional<Date> parse_date_prefix(std::string_view text, std::size_t& pos) {
  std::size_t p = pos;
  if (auto y = take_number(text, p, 4, 4); y && take_char(text, p, '-')) {
    auto m = take_number(text, p, 2, 2);
    if (!m || !take_char(text, p, '-')) return std::nullopt;
    auto d = take_number(text, p, 2, 2);
    if (!d) return std::nullopt;
    auto date = Date::from_ymd(*y, *m, *d);
    if (date) pos = p;
    return date;
  }
  p = pos;
  auto m = take_number(text, p, 1, 2);
  if (!m || !take_char(text, p, '/')) return std::nullopt;
  auto d = take_number(text, p, 1, 2);
  if (!d || !take_char(text, p, '/')) return std::nullopt;
  auto y = take_number(text, p, 4, 4);
  if (!y) return std::nullopt;
  auto date = Date::from_ymd(*y, *m, *d);
  if (date) pos = p;
  return date;
}

void append_number(std::string& out, int value, int width) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%0*d", width, value);
  out += buf;
}

// Shared by the date and timestamp formatters; dates pass midnight.
std::string format_civil(Date date, int hour, int minute, int second, std::string_view pattern) {
  std::string out;
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    char c = pattern[i];
    if (c != '%' || i + 1 >= pattern.size()) {
      out.push_back(c);
      continue;
    }
    bool unpadded = false;
    char directive = pattern[++i];
    if (directive == '-' && i + 1 < pattern.size()) {
      unpadded = true;
      directive = pattern[++i];
    }
    int width = unpadded ? 1 : 2;
    int hour12 = hour % 12 == 0 ? 12 : hour % 12;
    switch (directive) {
      case 'Y': append_number(out, date.year(), 4); break;
      case 'm': append_number(out, date.month(), width); break;
      case 'd': append_number(out, date.day(), width); break;
      case 'H': append_number(out, hour, width); break;
      case 'I': append_number(out, hour12, width); break;
      case 'M': append_number(out, minute, 2); break;
      case 'S': append_number(out, second, 2); break;
      case 'p': out += hour < 12 ? "AM" : "PM"; break;
      case 'P': out += hour < 12 ? "am" : "pm"; break;
      case '%': out.push_back('%'); break;
      default:
        out.push_back('%');
        if (unpadded) out.push_back('-');
        out.push_back(directive);
    }
  }
  return out;
}

}  // namespace

std::optional<Date> Date::from_ymd(int y, int m, int d) {
  const year_month_day ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
                           std::chrono::day{static_cast<unsigned>(d)}};
  if (y < 1 || y > 9999 || !ymd.ok()) return std::nullopt;
  return Date{static_cast<std::int32_t>(sys_days{ymd}.time_since_epoch().count())};
}

int Date::year() const { return static_cast<int>(civil(days).year()); }
int Date::month() const { return static_cast<int>(static_cast<unsigned>(civil(days).month())); }
int Date::day() const { return static_cast<int>(static_cast<unsigned>(civil(days).day())); }

std::optional<Timestamp> Timestamp::from_civil(int y, int mo, int d, int h, int mi, int s) {
  auto date = Date::from_ymd(y, mo, d);
  if (!date || h < 0 || h > 23 || mi < 0 || mi > 59 || s < 0 || s > 59) return std::nullopt;
  return Timestamp{static_cast<std::int64_t>(date->days) * kSecondsPerDay + h * 3600 + mi * 60 + s};
}

Date Timestamp::date() const {
  return Date{static_cast<std::int32_t>(floor_div(seconds, kSecondsPerDay))};
}

int Timestamp::hour() const {
  return static_cast<int>((seconds - floor_div(seconds, kSecondsPerDay) * kSecondsPerDay) / 3600);
}
int Timestamp::minute() const {
  return static_cast<int>((seconds - floor_div(seconds, 3600) * 3600) / 60);
}
int Timestamp::second() const { return static_cast<int>(seconds - floor_div(seconds, 60) * 60); }

std::optional<Date> parse_date(std::string_view text) {
  std::size_t pos = 0;
  auto date = parse_date_prefix(text, pos);
  if (!date || pos != text.size()) return std::nullopt;
  return date;
}

std::optional<Timestamp> parse_timestamp(std::string_view text) {
  std::size_t pos = 0;
  bool iso = text.size() >= 5 && text[4] == '-';
  auto date = parse_date_prefix(text, pos);
  if (!date) return std::nullopt;
  if (!(take_char(text, pos, iso ? 'T' : ' ') || take_char(text, pos, ' '))) return std::nullopt;
  auto hour = take_number(text, pos, iso ? 2 : 1, 2);
  if (!hour || !take_char(text, pos, ':')) return std::nullopt;
  auto minute = take_number(text, pos, 2, 2);
  if (!minute) return std::nullopt;
  int second = 0;
  if (take_char(text, pos, ':')) {
    auto s = take_number(text, pos, 2, 2);
    if (!s) return std::nullopt;
    second = *s;
  }
  int h = *hour;
  if (!iso) {
    take_char(text, pos, ' ');
    auto rest = text.substr(pos);
    auto lower = [](char c) { return static_cast<char>(c >= 'A' && c <= 'Z' ? c + 32 : c); };
    if (rest.size() != 2 || lower(rest[1]) != 'm') return std::nullopt;
    char half = lower(rest[0]);
    if ((half != 'a' && half != 'p') || h < 1 || h > 12) return std::nullopt;
    h = (h % 12) + (half == 'p' ? 12 : 0);
    pos = text.size();
  }
  if (pos != text.size()) return std::nullopt;
  auto ts = Timestamp::from_civil(date->year(), date->month(), date->day(), h, *minute, second);
  return ts;
}

std::string format_date(Date date, std::string_view pattern) {
  return format_civil(date, 0, 0, 0, pattern);
}

std::string format_timestamp(Timestamp ts, std::string_view pattern) {
  return format_civil(ts.date(), ts.hour(), ts.minute(), ts.second(), pattern);
}

std::string to_iso(Date date) { return format_date(date, kIsoDatePattern); }
std::string to_iso(Timestamp ts) { return format_timestamp(ts, kIsoTimestampPattern); }

Timestamp SystemClock::now() const {
  auto now = std::chrono::system_clock::now();
  return Timestamp{std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count()};
}

}  // namespace farmrec
