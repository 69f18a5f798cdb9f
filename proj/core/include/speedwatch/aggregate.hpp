#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "speedwatch/error.hpp"
#include "speedwatch/policy.hpp"

namespace speedwatch {

/// One row of the way-level summary output.
struct WaySummary
{
  std::uint64_t osm_way_id = 0;
  std::uint64_t total_row_number = 0;
  double added_speed_limit = 0.0;  // km/h
  std::uint64_t total_morning_count = 0;
  std::uint64_t total_night_count = 0;
  std::uint64_t morning_speeding_count = 0;  // aggressive points in the day window
  std::uint64_t night_speeding_count = 0;    // aggressive points in the night window
  double way_id_avg_speed = 0.0;             // km/h
  std::optional<double> way_id_speed_sd;     // sample SD, absent when n < 2
  std::uint64_t aggressive_speeding_row_number = 0;
  std::uint64_t reckless_speeding_row_number = 0;
  double aggressive_speeding_percent = 0.0;
  double reckless_speeding_percent = 0.0;

  friend bool operator==(const WaySummary&, const WaySummary&) = default;
};

class WayMismatch : public Error
{
public:
  using Error::Error;
};

class EmptyAccumulator : public Error
{
public:
  using Error::Error;
};

/// Mergeable single-pass state for one way: counters plus Welford mean/M2.
class WayAccumulator
{
public:
  WayAccumulator(std::uint64_t way_id, double limit_kmh, bool limit_imputed);

  /// Throws WayMismatch if the point belongs to another way or carries a
  /// different limit.
  void add(const ClassifiedPoint& cp);

  /// Folds `other` in (Chan et al. pairwise combination of mean/M2).
  void merge(const WayAccumulator& other);

  WaySummary finalize() const;

  std::uint64_t way_id() const { return way_id_; }
  double limit_kmh() const { return limit_kmh_; }
  bool limit_imputed() const { return limit_imputed_; }
  std::uint64_t n() const { return n_; }
  std::uint64_t day_n() const { return day_n_; }
  std::uint64_t night_n() const { return night_n_; }
  std::uint64_t day_aggressive_n() const { return day_aggressive_n_; }
  std::uint64_t night_aggressive_n() const { return night_aggressive_n_; }
  std::uint64_t aggressive_n() const { return aggressive_n_; }
  std::uint64_t reckless_n() const { return reckless_n_; }
  double mean() const { return mean_; }
  double m2() const { return m2_; }

private:
  void check_compatible(std::uint64_t way_id, double limit_kmh) const;

  std::uint64_t way_id_;
  double limit_kmh_;
  bool limit_imputed_;
  std::uint64_t n_ = 0;
  std::uint64_t day_n_ = 0;
  std::uint64_t night_n_ = 0;
  std::uint64_t day_aggressive_n_ = 0;
  std::uint64_t night_aggressive_n_ = 0;
  std::uint64_t aggressive_n_ = 0;
  std::uint64_t reckless_n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

WayAccumulator accumulate(WayAccumulator acc, const ClassifiedPoint& cp);
WayAccumulator merge(WayAccumulator a, const WayAccumulator& b);
WaySummary finalize(const WayAccumulator& acc);

/// Per-way accumulator table fed one classified point at a time.
class WayAggregator
{
public:
  void add(const ClassifiedPoint& cp);
  void merge(const WayAggregator& other);

  std::size_t way_count() const { return ways_.size(); }
  std::uint64_t points() const { return points_; }
  const std::unordered_map<std::uint64_t, WayAccumulator>& accumulators() const { return ways_; }

  /// Summaries in ascending way ID order.
  std::vector<WaySummary> finalize() const;

private:
  std::unordered_map<std::uint64_t, WayAccumulator> ways_;
  std::uint64_t points_ = 0;
};

std::vector<WaySummary> aggregate_stream(std::span<const ClassifiedPoint> points);

/// 100 * count / total, with the product formed first so whole percentages
/// come out exact.
double percent_of(std::uint64_t count, std::uint64_t total);

inline constexpr std::string_view kSummaryHeader =
  "osm_way_id,total_row_number,added_speed_limit,total_morning_count,total_night_count,"
  "morning_speeding_count,night_speeding_count,way_id_avg_speed,way_id_speed_sd,"
  "aggressive_speeding_row_number,reckless_speeding_row_number,aggressive_speeding_percent,"
  "reckless_speeding_percent";

/// Reals are written in shortest round-trip form with at least two decimals;
/// an absent SD is an empty field.
void write_summary_csv(std::span<const WaySummary> summaries, std::ostream& out);

/// Throws DataError ("MalformedRow") on malformed input.
std::vector<WaySummary> read_summary_csv(std::istream& in);

}  // namespace speedwatch
