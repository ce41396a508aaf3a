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

#include <gtest/gtest.h>

#include <random>

#include "farmrec/time.hpp"
#include "oracles/calendar.hpp"

namespace farmrec {
namespace {

TEST(DateTest, MatchesBruteForceDayCount) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> year(1900, 2100), month(1, 12);
  for (int i = 0; i < 2000; ++i) {
    int y = year(rng), m = month(rng);
    int d = std::uniform_int_distribution<int>(1, oracle::month_length(y, m))(rng);
    auto date = Date::from_ymd(y, m, d);
    ASSERT_TRUE(date) << y << "-" << m << "-" << d;
    EXPECT_EQ(date->days, oracle::days_from_civil(y, m, d));
    EXPECT_EQ(date->year(), y);
    EXPECT_EQ(date->month(), m);
    EXPECT_EQ(date->day(), d);
  }
}

TEST(DateTest, RejectsImpossibleDays) {
  EXPECT_FALSE(Date::from_ymd(2023, 2, 29));
  EXPECT_TRUE(Date::from_ymd(2024, 2, 29));
  EXPECT_FALSE(Date::from_ymd(1900, 2, 29));
  EXPECT_TRUE(Date::from_ymd(2000, 2, 29));
  EXPECT_FALSE(Date::from_ymd(2022, 4, 31));
  EXPECT_FALSE(Date::from_ymd(2022, 13, 1));
  EXPECT_FALSE(Date::from_ymd(2022, 0, 1));
  EXPECT_FALSE(Date::from_ymd(2022, 1, 0));
}

TEST(DateTest, ParsesIsoAndUsForms) {
  auto expected = Date::from_ymd(2022, 12, 20);
  EXPECT_EQ(parse_date("2022-12-20"), expected);
  EXPECT_EQ(parse_date("12/20/2022"), expected);
  EXPECT_FALSE(parse_date(" 12/20/2022 "));  // trimming belongs to validation
  EXPECT_EQ(parse_date("1/5/2023"), Date::from_ymd(2023, 1, 5));
  EXPECT_FALSE(parse_date("2022-02-30"));
  EXPECT_FALSE(parse_date("20/12/2022"));
  EXPECT_FALSE(parse_date("2022-12-20x"));
  EXPECT_FALSE(parse_date("yesterday"));
  EXPECT_FALSE(parse_date(""));
}

TEST(TimestampTest, ParsesFixtureStyle) {
  EXPECT_EQ(parse_timestamp("12/20/2022 11:35am"), Timestamp::from_civil(2022, 12, 20, 11, 35));
  EXPECT_EQ(parse_timestamp("12/20/2022 12:30pm"), Timestamp::from_civil(2022, 12, 20, 12, 30));
  EXPECT_EQ(parse_timestamp("12/20/2022 12:05 AM"), Timestamp::from_civil(2022, 12, 20, 0, 5));
  EXPECT_EQ(parse_timestamp("2022-12-20T11:35:00"), Timestamp::from_civil(2022, 12, 20, 11, 35));
  EXPECT_EQ(parse_timestamp("2022-12-20 11:35"), Timestamp::from_civil(2022, 12, 20, 11, 35));
  EXPECT_FALSE(parse_timestamp("12/20/2022 13:35pm"));
  EXPECT_FALSE(parse_timestamp("2022-12-20T24:00:00"));
  EXPECT_FALSE(parse_timestamp("2022-12-20"));
}

TEST(TimestampTest, FormatsPresets) {
  auto ts = *Timestamp::from_civil(2022, 12, 20, 11, 35, 0);
  EXPECT_EQ(format_timestamp(ts, "%-m/%-d/%Y %-I:%M%P"), "12/20/2022 11:35am");
  EXPECT_EQ(format_timestamp(*Timestamp::from_civil(2023, 3, 4, 0, 7, 9), "%-m/%-d/%Y %-I:%M%P"), "3/4/2023 12:07am");
  EXPECT_EQ(format_timestamp(*Timestamp::from_civil(2023, 3, 4, 13, 7, 9), "%I %p %%"), "01 PM %");
  EXPECT_EQ(to_iso(ts), "2022-12-20T11:35:00");
  EXPECT_EQ(format_date(ts.date(), "%m/%d/%Y"), "12/20/2022");
}

TEST(TimestampTest, FormatParseRoundTrip) {
  std::mt19937_64 rng(11);
  auto lo = Timestamp::from_civil(1950, 1, 1, 0, 0)->seconds;
  auto hi = Timestamp::from_civil(2090, 12, 31, 23, 59, 59)->seconds;
  std::uniform_int_distribution<std::int64_t> pick(lo, hi);
  for (int i = 0; i < 2000; ++i) {
    Timestamp ts{pick(rng)};
    EXPECT_EQ(parse_timestamp(to_iso(ts)), ts);
    Timestamp minute{ts.seconds - ts.second()};
    EXPECT_EQ(parse_timestamp(format_timestamp(minute, "%-m/%-d/%Y %-I:%M%P")), minute);
    EXPECT_EQ(parse_date(to_iso(ts.date())), ts.date());
  }
}

TEST(ClockTest, ManualClockMoves) {
  ManualClock clock(Timestamp{100});
  clock.advance(5);
  EXPECT_EQ(clock.now().seconds, 105);
  clock.set(Timestamp{7});
  EXPECT_EQ(clock.now().seconds, 7);
}

}  // namespace
}  // namespace farmrec
