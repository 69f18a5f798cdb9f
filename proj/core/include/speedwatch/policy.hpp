#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <string_view>

#include <nlohmann/json_fwd.hpp>

#include "speedwatch/osm_ways.hpp"
#include "speedwatch/trajectory.hpp"

namespace speedwatch {

enum class LimitRounding : std::uint8_t {
  Exact,         // 25 mph -> 40.2336 km/h
  Rounded,       // default limit rounded to whole km/h: 25 mph -> 40 km/h
};

std::string_view to_string(LimitRounding rounding);
LimitRounding limit_rounding_from_string(std::string_view name);  // "exact" | "rounded"

struct SpeedPolicy
{
  double default_limit_mph = 25.0;
  double aggressive_delta_mph = 10.0;
  double reckless_delta_mph = 20.0;
  LimitRounding limit_rounding = LimitRounding::Exact;

  /// Throws ConfigError unless all magnitudes are positive and finite and
  /// reckless_delta_mph >= aggressive_delta_mph.
  void validate() const;
};

/// Local-clock windows, half-open [start, end) in whole hours. A window whose
/// start is after its end wraps midnight.
struct TimeBinConfig
{
  int day_start = 8;
  int day_end = 16;
  int night_start = 21;
  int night_end = 5;
  int utc_offset_minutes = -240;

  /// Throws ConfigError on out-of-range hours, empty windows, overlapping
  /// windows, or an offset beyond +/-18 h.
  void validate() const;
};

enum class TimeBin : std::uint8_t { Day, Night, Other };

std::string_view to_string(TimeBin bin);

struct SpeedFlags
{
  bool aggressive = false;
  bool reckless = false;

  friend bool operator==(const SpeedFlags&, const SpeedFlags&) = default;
};

struct EffectiveLimit
{
  double kmh = 0.0;
  bool imputed = false;

  friend bool operator==(const EffectiveLimit&, const EffectiveLimit&) = default;
};

struct SpeedThresholds
{
  double aggressive_kmh = 0.0;
  double reckless_kmh = 0.0;
};

struct ClassifiedPoint
{
  TrajectoryPoint point;
  double limit_kmh = 0.0;
  bool limit_imputed = false;
  SpeedFlags flags;
  TimeBin bin = TimeBin::Other;
};

bool filter_postal(const TrajectoryPoint& point, const std::set<std::string, std::less<>>& allowed);

/// Exact, case-sensitive match on highway_class == "residential".
bool is_residential(const WayRecord& way);

/// `way` may be null (no OSM record); the default limit is imputed then.
EffectiveLimit effective_speed_limit(const WayRecord* way, const SpeedPolicy& policy);

/// limit + delta_mph * 1.609344 for both deltas, each rounded once to the
/// nearest double. The sum is formed in fixed point (1e-9 km/h units) so that
/// decimal limits add exactly: 40.2336 + 16.09344 is 56.32704 and not the
/// next double up.
SpeedThresholds speed_thresholds(double limit_kmh, const SpeedPolicy& policy);

/// Both comparisons are inclusive (speed >= threshold).
SpeedFlags classify_speed(double speed_kmh, double limit_kmh, const SpeedPolicy& policy);
SpeedFlags classify_speed(double speed_kmh, const SpeedThresholds& thresholds);

TimeBin time_bin(std::int64_t timestamp, const TimeBinConfig& cfg);

/// Local seconds since midnight for `timestamp` under the configured offset.
std::int64_t local_second_of_day(std::int64_t timestamp, int utc_offset_minutes);

/// JSON objects with the field names above; missing keys keep the current
/// value, unknown keys throw ConfigError.
void read_json(const nlohmann::json& j, SpeedPolicy& policy);
void read_json(const nlohmann::json& j, TimeBinConfig& cfg);
nlohmann::json to_json(const SpeedPolicy& policy);
nlohmann::json to_json(const TimeBinConfig& cfg);

}  // namespace speedwatch
