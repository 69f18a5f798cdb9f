#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>

#include <nlohmann/json.hpp>

#include "speedwatch/policy.hpp"
#include "test_support.hpp"

using namespace speedwatch;

namespace {

// Local wall-clock time on 2022-04-05 under the default UTC-4 offset.
std::int64_t local(int h, int m = 0, int s = 0)
{
  const std::int64_t midnight_utc = 1649116800;  // 2022-04-05T00:00:00Z
  return midnight_utc + 4 * 3600 + h * 3600 + m * 60 + s;
}

SpeedPolicy rounded_policy()
{
  SpeedPolicy p;
  p.limit_rounding = LimitRounding::Rounded;
  return p;
}

}  // namespace

TEST(PostalFilterTest, Examples)
{
  const std::set<std::string, std::less<>> allowed = {"22901", "22902"};
  EXPECT_TRUE(filter_postal(testutil::point(1, 50, 1649160000, "22901"), allowed));
  EXPECT_FALSE(filter_postal(testutil::point(1, 50, 1649160000, "99999"), allowed));
}

TEST(ResidentialTest, Examples)
{
  EXPECT_TRUE(is_residential({1, "residential", {}, {}}));
  EXPECT_FALSE(is_residential({1, "primary", {}, {}}));
  EXPECT_FALSE(is_residential({1, "Residential", {}, {}}));
}

TEST(EffectiveLimitTest, Examples)
{
  const WayRecord posted{1, "residential", "30 mph", 48.28032};
  const WayRecord bare{2, "residential", {}, {}};
  EXPECT_EQ(effective_speed_limit(&posted, SpeedPolicy{}), (EffectiveLimit{48.28032, false}));
  EXPECT_EQ(effective_speed_limit(&bare, SpeedPolicy{}), (EffectiveLimit{40.2336, true}));
  EXPECT_EQ(effective_speed_limit(&bare, rounded_policy()), (EffectiveLimit{40.0, true}));
  EXPECT_EQ(effective_speed_limit(nullptr, SpeedPolicy{}), (EffectiveLimit{40.2336, true}));
  // Posted limits are never rounded.
  EXPECT_EQ(effective_speed_limit(&posted, rounded_policy()), (EffectiveLimit{48.28032, false}));
}

TEST(ClassifyTest, BoundaryExamples)
{
  const SpeedPolicy p;
  EXPECT_EQ(classify_speed(56.32704, 40.2336, p), (SpeedFlags{true, false}));
  EXPECT_EQ(classify_speed(72.42048, 40.2336, p), (SpeedFlags{true, true}));
  EXPECT_EQ(classify_speed(40.2336, 40.2336, p), (SpeedFlags{false, false}));
}

TEST(ClassifyTest, OneUlpBelowFlips)
{
  const SpeedPolicy p;
  EXPECT_EQ(classify_speed(std::nextafter(56.32704, 0.0), 40.2336, p), (SpeedFlags{false, false}));
  EXPECT_EQ(classify_speed(std::nextafter(72.42048, 0.0), 40.2336, p), (SpeedFlags{true, false}));

  const auto q = rounded_policy();
  EXPECT_EQ(classify_speed(56.09344, 40.0, q), (SpeedFlags{true, false}));
  EXPECT_EQ(classify_speed(72.18688, 40.0, q), (SpeedFlags{true, true}));
  EXPECT_EQ(classify_speed(std::nextafter(56.09344, 0.0), 40.0, q), (SpeedFlags{false, false}));
  EXPECT_EQ(classify_speed(std::nextafter(72.18688, 0.0), 40.0, q), (SpeedFlags{true, false}));
}

TEST(ClassifyTest, ThresholdsAreCorrectlyRoundedDecimalSums)
{
  // Posted limits in whole mph: threshold must equal the double nearest to
  // (limit_mph + delta) * 1.609344 written out in decimal.
  for (int mph = 5; mph <= 85; mph += 5) {
    const double limit = mph * kKmhPerMph;
    const auto t = speed_thresholds(limit, SpeedPolicy{});
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", (mph + 10) * 1.609344);
    EXPECT_EQ(t.aggressive_kmh, std::strtod(buf, nullptr)) << mph;
    std::snprintf(buf, sizeof buf, "%.6f", (mph + 20) * 1.609344);
    EXPECT_EQ(t.reckless_kmh, std::strtod(buf, nullptr)) << mph;
  }
}

TEST(ClassifyProperty, MonotoneAndNested)
{
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> limit(5, 130), speed(0, 250);
  const SpeedPolicy p;
  for (int i = 0; i < 20000; ++i) {
    const double l = limit(rng);
    double a = speed(rng), b = speed(rng);
    if (a > b)
      std::swap(a, b);
    const auto fa = classify_speed(a, l, p), fb = classify_speed(b, l, p);
    EXPECT_LE(fa.aggressive, fb.aggressive);
    EXPECT_LE(fa.reckless, fb.reckless);
    EXPECT_LE(fa.reckless, fa.aggressive);
    EXPECT_LE(fb.reckless, fb.aggressive);
  }
}

TEST(TimeBinTest, Examples)
{
  const TimeBinConfig cfg;
  EXPECT_EQ(time_bin(local(8), cfg), TimeBin::Day);
  EXPECT_EQ(time_bin(local(3, 30), cfg), TimeBin::Night);
  EXPECT_EQ(time_bin(local(16), cfg), TimeBin::Other);
  EXPECT_EQ(time_bin(local(17, 30), cfg), TimeBin::Other);
  EXPECT_EQ(time_bin(local(15, 59, 59), cfg), TimeBin::Day);
  EXPECT_EQ(time_bin(local(21), cfg), TimeBin::Night);
  EXPECT_EQ(time_bin(local(0), cfg), TimeBin::Night);
  EXPECT_EQ(time_bin(local(4, 59, 59), cfg), TimeBin::Night);
  EXPECT_EQ(time_bin(local(5), cfg), TimeBin::Other);
  EXPECT_EQ(time_bin(local(7, 59, 59), cfg), TimeBin::Other);
}

TEST(TimeBinProperty, PartitionMatchesHourTable)
{
  const TimeBinConfig cfg;
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<std::int64_t> ts(1, 4'000'000'000);
  for (int i = 0; i < 20000; ++i) {
    const std::int64_t t = ts(rng);
    // Independent local hour: shift and take a floored modulus.
    std::int64_t shifted = t - 4 * 3600;
    const std::int64_t hour = ((shifted % 86400) + 86400) % 86400 / 3600;
    TimeBin expected = TimeBin::Other;
    if (hour >= 8 && hour < 16)
      expected = TimeBin::Day;
    else if (hour >= 21 || hour < 5)
      expected = TimeBin::Night;
    EXPECT_EQ(time_bin(t, cfg), expected) << t;
  }
}

TEST(ConfigTest, ValidationRejectsBadValues)
{
  SpeedPolicy p;
  p.reckless_delta_mph = 5;
  EXPECT_THROW(p.validate(), ConfigError);
  p = {};
  p.default_limit_mph = -1;
  EXPECT_THROW(p.validate(), ConfigError);

  TimeBinConfig c;
  c.day_start = 24;
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.day_end = c.day_start;
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.night_start = 15;
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.utc_offset_minutes = 20 * 60;
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(ConfigTest, JsonRoundTripAndUnknownKeys)
{
  SpeedPolicy p = rounded_policy();
  p.default_limit_mph = 30;
  SpeedPolicy q;
  read_json(to_json(p), q);
  EXPECT_EQ(q.default_limit_mph, 30);
  EXPECT_EQ(q.limit_rounding, LimitRounding::Rounded);
  EXPECT_THROW(read_json(nlohmann::json{{"bogus", 1}}, q), ConfigError);

  TimeBinConfig c;
  c.utc_offset_minutes = -300;
  TimeBinConfig d;
  read_json(to_json(c), d);
  EXPECT_EQ(d.utc_offset_minutes, -300);
  EXPECT_THROW(read_json(nlohmann::json{{"day_start", "eight"}}, d), ConfigError);
}
