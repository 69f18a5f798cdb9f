#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "speedwatch/aggregate.hpp"
#include "test_support.hpp"

using namespace speedwatch;
using speedwatch::testutil::classified;

namespace {

std::vector<ClassifiedPoint> random_points(std::mt19937_64& rng, std::uint64_t way, std::size_t n)
{
  std::uniform_real_distribution<double> speed(0, 120);
  std::vector<ClassifiedPoint> pts;
  for (std::size_t i = 0; i < n; ++i) {
    const double s = speed(rng);
    const auto bin = static_cast<TimeBin>(rng() % 3);
    const bool agg = s >= 56.0;
    pts.push_back(classified(way, s, bin, agg, agg && s >= 72.0));
  }
  return pts;
}

void expect_same_state(const WayAccumulator& a, const WayAccumulator& b)
{
  EXPECT_EQ(a.n(), b.n());
  EXPECT_EQ(a.day_n(), b.day_n());
  EXPECT_EQ(a.night_n(), b.night_n());
  EXPECT_EQ(a.day_aggressive_n(), b.day_aggressive_n());
  EXPECT_EQ(a.night_aggressive_n(), b.night_aggressive_n());
  EXPECT_EQ(a.aggressive_n(), b.aggressive_n());
  EXPECT_EQ(a.reckless_n(), b.reckless_n());
  if (a.n() == 0)
    return;
  const auto sa = a.finalize(), sb = b.finalize();
  EXPECT_NEAR(sa.way_id_avg_speed, sb.way_id_avg_speed, 1e-9);
  ASSERT_EQ(sa.way_id_speed_sd.has_value(), sb.way_id_speed_sd.has_value());
  if (sa.way_id_speed_sd)
    EXPECT_NEAR(*sa.way_id_speed_sd, *sb.way_id_speed_sd, 1e-9);
}

}  // namespace

TEST(AccumulateTest, WelfordSteps)
{
  WayAccumulator acc(7, 40.2336, true);
  acc = accumulate(acc, classified(7, 50, TimeBin::Day));
  EXPECT_EQ(acc.n(), 1u);
  EXPECT_EQ(acc.day_n(), 1u);
  EXPECT_EQ(acc.mean(), 50.0);
  EXPECT_EQ(acc.m2(), 0.0);

  acc = accumulate(acc, classified(7, 60, TimeBin::Night, true, false));
  const auto ref = testutil::two_pass({50, 60});
  EXPECT_EQ(acc.n(), 2u);
  EXPECT_EQ(acc.night_n(), 1u);
  EXPECT_EQ(acc.aggressive_n(), 1u);
  EXPECT_EQ(acc.night_aggressive_n(), 1u);
  EXPECT_EQ(acc.mean(), ref.mean);
  EXPECT_EQ(acc.m2(), ref.ssd);
  EXPECT_EQ(acc.mean(), 55.0);
  EXPECT_EQ(acc.m2(), 50.0);
}

TEST(AccumulateTest, OtherBinTouchesOnlyTotals)
{
  WayAccumulator acc(7, 40.2336, true);
  acc.add(classified(7, 80, TimeBin::Other, true, true));
  EXPECT_EQ(acc.n(), 1u);
  EXPECT_EQ(acc.aggressive_n(), 1u);
  EXPECT_EQ(acc.reckless_n(), 1u);
  EXPECT_EQ(acc.day_n() + acc.night_n(), 0u);
  EXPECT_EQ(acc.day_aggressive_n() + acc.night_aggressive_n(), 0u);
}

TEST(AccumulateTest, MismatchThrows)
{
  WayAccumulator acc(7, 40.2336, true);
  EXPECT_THROW(acc.add(classified(8, 50, TimeBin::Day)), WayMismatch);
  EXPECT_THROW(acc.add(classified(7, 50, TimeBin::Day, false, false, 48.0)), WayMismatch);
  WayAccumulator other(8, 40.2336, true);
  EXPECT_THROW(acc.merge(other), WayMismatch);
}

TEST(MergeTest, SingletonsCombine)
{
  WayAccumulator a(7, 40.2336, true), b(7, 40.2336, true), seq(7, 40.2336, true);
  a.add(classified(7, 50, TimeBin::Day));
  b.add(classified(7, 60, TimeBin::Night, true));
  seq.add(classified(7, 50, TimeBin::Day));
  seq.add(classified(7, 60, TimeBin::Night, true));
  const auto m = merge(a, b);
  expect_same_state(m, seq);
  EXPECT_EQ(m.mean(), 55.0);
  EXPECT_EQ(m.m2(), 50.0);
}

TEST(MergeTest, EmptyIsIdentity)
{
  std::mt19937_64 rng(1);
  WayAccumulator a(7, 40.2336, true);
  for (const auto& cp : random_points(rng, 7, 50))
    a.add(cp);
  const WayAccumulator empty(7, 40.2336, true);
  const auto left = merge(a, empty), right = merge(empty, a);
  EXPECT_EQ(left.mean(), a.mean());
  EXPECT_EQ(left.m2(), a.m2());
  EXPECT_EQ(right.mean(), a.mean());
  EXPECT_EQ(right.m2(), a.m2());
  expect_same_state(left, a);
}

TEST(MergeProperty, RandomSplitsMatchSequentialAndTwoPass)
{
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng() % 300;
    const auto pts = random_points(rng, 9, n);

    WayAccumulator seq(9, 40.2336, true);
    for (const auto& cp : pts)
      seq.add(cp);

    // Split into 1..8 contiguous chunks, merge in random order.
    const std::size_t parts = 1 + rng() % 8;
    std::vector<WayAccumulator> chunks(parts, WayAccumulator(9, 40.2336, true));
    for (std::size_t i = 0; i < n; ++i)
      chunks[rng() % parts].add(pts[i]);
    std::shuffle(chunks.begin(), chunks.end(), rng);
    WayAccumulator merged(9, 40.2336, true);
    for (const auto& c : chunks)
      merged.merge(c);
    expect_same_state(merged, seq);

    if (parts >= 2) {
      const auto ab = merge(chunks[0], chunks[1]), ba = merge(chunks[1], chunks[0]);
      expect_same_state(ab, ba);
    }

    std::vector<double> speeds;
    for (const auto& cp : pts)
      speeds.push_back(cp.point.speed_kmh);
    const auto ref = testutil::two_pass(speeds);
    const auto s = merged.finalize();
    EXPECT_NEAR(s.way_id_avg_speed, ref.mean, 1e-9);
    if (n >= 2)
      EXPECT_NEAR(*s.way_id_speed_sd, std::sqrt(ref.ssd / static_cast<double>(n - 1)), 1e-9);
    else
      EXPECT_FALSE(s.way_id_speed_sd);
  }
}

TEST(FinalizeTest, PercentagesAreExact)
{
  WayAccumulator acc(1, 40.2336, true);
  for (int i = 0; i < 100; ++i)
    acc.add(classified(1, 80, TimeBin::Day, i < 95, i < 91));
  const auto s = acc.finalize();
  EXPECT_EQ(s.total_row_number, 100u);
  EXPECT_EQ(s.aggressive_speeding_percent, 95.0);
  EXPECT_EQ(s.reckless_speeding_percent, 91.0);
  EXPECT_EQ(s.added_speed_limit, 40.2336);
}

TEST(FinalizeTest, ZeroViolations)
{
  WayAccumulator acc(1, 40.2336, true);
  for (double v : {30.0, 32.0, 35.0, 41.0})
    acc.add(classified(1, v, TimeBin::Other));
  const auto s = acc.finalize();
  const auto ref = testutil::two_pass({30, 32, 35, 41});
  EXPECT_EQ(s.aggressive_speeding_percent, 0.0);
  EXPECT_NEAR(s.way_id_avg_speed, ref.mean, 1e-12);
  EXPECT_NEAR(*s.way_id_speed_sd, std::sqrt(ref.ssd / 3.0), 1e-12);
}

TEST(FinalizeTest, EmptyAccumulatorThrows)
{
  EXPECT_THROW(WayAccumulator(1, 40.2336, true).finalize(), EmptyAccumulator);
}

TEST(AggregateStreamTest, TwoWays)
{
  std::vector<ClassifiedPoint> pts;
  for (int i = 0; i < 3; ++i) {
    pts.push_back(classified(20, 40 + i, TimeBin::Day));
    pts.push_back(classified(10, 30 + i, TimeBin::Night));
  }
  const auto out = aggregate_stream(pts);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].osm_way_id, 10u);
  EXPECT_EQ(out[1].osm_way_id, 20u);
  EXPECT_EQ(out[0].total_row_number, 3u);
  EXPECT_EQ(out[1].total_row_number, 3u);
  EXPECT_TRUE(aggregate_stream({}).empty());
}

TEST(AggregateProperty, PermutationInvariant)
{
  std::mt19937_64 rng(8);
  std::vector<ClassifiedPoint> pts;
  for (std::uint64_t w = 1; w <= 20; ++w) {
    auto more = random_points(rng, w, 1 + rng() % 100);
    pts.insert(pts.end(), more.begin(), more.end());
  }
  const auto base = aggregate_stream(pts);
  for (int k = 0; k < 10; ++k) {
    std::shuffle(pts.begin(), pts.end(), rng);
    const auto again = aggregate_stream(pts);
    ASSERT_EQ(again.size(), base.size());
    for (std::size_t i = 0; i < base.size(); ++i) {
      EXPECT_EQ(again[i].osm_way_id, base[i].osm_way_id);
      EXPECT_EQ(again[i].aggressive_speeding_row_number, base[i].aggressive_speeding_row_number);
      EXPECT_EQ(again[i].morning_speeding_count, base[i].morning_speeding_count);
      EXPECT_NEAR(again[i].way_id_avg_speed, base[i].way_id_avg_speed, 1e-9);
    }
  }
}

TEST(AggregatorTest, MergeOfShardsMatchesSingle)
{
  std::mt19937_64 rng(9);
  std::vector<ClassifiedPoint> pts;
  for (std::uint64_t w = 1; w <= 30; ++w) {
    auto more = random_points(rng, w, 1 + rng() % 60);
    pts.insert(pts.end(), more.begin(), more.end());
  }
  WayAggregator single, a, b;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    single.add(pts[i]);
    (i % 2 ? a : b).add(pts[i]);
  }
  a.merge(b);
  EXPECT_EQ(a.points(), single.points());
  const auto x = a.finalize(), y = single.finalize();
  ASSERT_EQ(x.size(), y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    EXPECT_EQ(x[i].total_row_number, y[i].total_row_number);
    EXPECT_NEAR(x[i].way_id_avg_speed, y[i].way_id_avg_speed, 1e-9);
  }
}

TEST(SummaryCsvTest, RoundTripAndFormatting)
{
  WaySummary a{1, 100, 40.2336, 40, 30, 38, 28, 57.5, 3.25, 95, 91, 95.0, 91.0};
  WaySummary b{2, 1, 48.28032, 0, 0, 0, 0, 30.0, std::nullopt, 0, 0, 0.0, 0.0};
  std::vector<WaySummary> in_rows = {a, b};
  std::stringstream buf;
  write_summary_csv(in_rows, buf);
  const std::string text = buf.str();
  EXPECT_EQ(text.substr(0, kSummaryHeader.size()), kSummaryHeader);
  EXPECT_NE(text.find("95.00,91.00"), std::string::npos);
  EXPECT_NE(text.find("30.00,,0,0"), std::string::npos);
  EXPECT_EQ(read_summary_csv(buf), in_rows);
}

TEST(SummaryCsvTest, RejectsNestingViolation)
{
  std::istringstream in(std::string(kSummaryHeader) + "\n1,10,40.2336,0,0,0,0,50,1,2,3,20,30\n");
  EXPECT_THROW(read_summary_csv(in), DataError);
}

TEST(PercentTest, ProductFirst)
{
  EXPECT_EQ(percent_of(95, 100), 95.0);
  EXPECT_EQ(percent_of(0, 7), 0.0);
  EXPECT_EQ(percent_of(7, 7), 100.0);
  EXPECT_EQ(percent_of(1, 3), 100.0 / 3.0);
}
