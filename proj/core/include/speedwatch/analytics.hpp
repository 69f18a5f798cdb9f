#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "speedwatch/aggregate.hpp"
#include "speedwatch/osm_ways.hpp"

namespace speedwatch {

enum class Metric : std::uint8_t { Aggressive, Reckless };

std::string_view to_string(Metric metric);
Metric metric_from_string(std::string_view name);  // "aggressive" | "reckless"
double metric_value(const WaySummary& s, Metric metric);

class EmptyInput : public Error
{
public:
  using Error::Error;
};

struct CdfPoint
{
  double value_percent = 0.0;
  double cum_fraction = 0.0;

  friend bool operator==(const CdfPoint&, const CdfPoint&) = default;
};

/// Empirical CDF F(x) = #{metric <= x} / total, one point per distinct value.
struct CdfSeries
{
  std::string metric_name;
  std::vector<CdfPoint> points;

  /// F evaluated at an arbitrary x (0 below the first breakpoint).
  double at(double x) const;
};

std::vector<WaySummary> filter_min_observations(std::span<const WaySummary> summaries, std::uint64_t min_rows = 100);

/// Throws EmptyInput on an empty input.
CdfSeries compute_cdf(std::span<const WaySummary> summaries, Metric metric);

/// Share of ways with metric > 0 when x == 0 ("at least one instance"),
/// otherwise metric >= x ("at least x percent"). Throws EmptyInput.
double fraction_exceeding(std::span<const WaySummary> summaries, Metric metric, double x);

/// Report-scoped way ID -> letter aliases, assigned a, b, ..., z, aa, ab, ...
/// in order of first appearance.
class AliasMap
{
public:
  const std::string& alias_for(std::uint64_t way_id);
  const std::string* find(std::uint64_t way_id) const;
  std::size_t size() const { return order_.size(); }

  /// (way_id, alias) in assignment order.
  std::vector<std::pair<std::uint64_t, std::string>> entries() const;

private:
  std::unordered_map<std::uint64_t, std::string> aliases_;
  std::vector<std::uint64_t> order_;
};

/// Bijective base-26 letters: 0 -> "a", 25 -> "z", 26 -> "aa".
std::string alias_letters(std::size_t index);

/// Assigns aliases across ranked way lists in presentation order.
AliasMap anonymize(const std::vector<std::vector<std::uint64_t>>& tables);

/// Sorted by metric descending, then total_row_number descending, then way ID ascending.
std::vector<WaySummary> rank_by_metric(std::span<const WaySummary> summaries, Metric metric);

struct AnonymizedRow
{
  std::string alias;
  std::uint64_t way_id = 0;  // kept for callers; never written to published tables
  std::uint64_t total_rows = 0;
  double percent = 0.0;
  double avg_speed = 0.0;
  std::optional<double> speed_sd;
  double limit_kmh = 0.0;
};

struct AnonymizedTable
{
  Metric metric = Metric::Aggressive;
  std::vector<AnonymizedRow> rows;
};

/// Top `n` ways by `metric`; aliases come from (and extend) `aliases`.
AnonymizedTable top_n(std::span<const WaySummary> summaries, Metric metric, std::size_t n, AliasMap& aliases);

struct DayNightResult
{
  std::uint64_t higher_day = 0;
  std::uint64_t higher_night = 0;
  std::uint64_t excluded = 0;  // an empty period, or equal rates (including both zero)

  friend bool operator==(const DayNightResult&, const DayNightResult&) = default;
};

/// Compares aggressive rates per period (period aggressive count / period
/// total). Expects summaries already filtered by minimum observations.
DayNightResult day_night_comparison(std::span<const WaySummary> summaries);

struct CrashRecord
{
  std::uint64_t way_id = 0;
  std::string crash_date;
};

struct CrashFrequencyTable
{
  std::map<std::uint64_t, std::uint64_t> rows;  // crash count -> way count
  std::uint64_t no_info = 0;                    // residential ways without crashes
  std::uint64_t dropped_records = 0;            // crashes on unknown or non-residential ways

  friend bool operator==(const CrashFrequencyTable&, const CrashFrequencyTable&) = default;
};

CrashFrequencyTable crash_frequency(std::span<const CrashRecord> crashes, const WayTable& ways);

/// Header `way_id,crash_date`. Throws DataError ("MalformedRow").
std::vector<CrashRecord> read_crash_csv(std::istream& in);

}  // namespace speedwatch
