#include "speedwatch/policy.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <nlohmann/json.hpp>

#include "speedwatch/error.hpp"

namespace speedwatch {

namespace {

constexpr double kFixedScale = 1e9;

std::int64_t to_fixed(double kmh) { return std::llround(kmh * kFixedScale); }

bool in_window(int hour, int start, int end)
{
  return start < end ? (hour >= start && hour < end) : (hour >= start || hour < end);
}

void check_hour(int value, int max, const char* name)
{
  if (value < 0 || value > max)
    throw ConfigError(std::string("time bin: ") + name + " must be in [0, " + std::to_string(max) + "]");
}

void check_positive(double v, const char* name)
{
  if (!(v > 0.0) || !std::isfinite(v))
    throw ConfigError(std::string("speed policy: ") + name + " must be positive and finite");
}

}  // namespace

std::string_view to_string(LimitRounding rounding)
{
  return rounding == LimitRounding::Exact ? "exact" : "rounded";
}

LimitRounding limit_rounding_from_string(std::string_view name)
{
  if (name == "exact")
    return LimitRounding::Exact;
  if (name == "rounded")
    return LimitRounding::Rounded;
  throw ConfigError("unknown limit rounding '" + std::string(name) + "' (expected exact|rounded)");
}

void SpeedPolicy::validate() const
{
  check_positive(default_limit_mph, "default_limit_mph");
  check_positive(aggressive_delta_mph, "aggressive_delta_mph");
  check_positive(reckless_delta_mph, "reckless_delta_mph");
  if (reckless_delta_mph < aggressive_delta_mph)
    throw ConfigError("speed policy: reckless_delta_mph must be >= aggressive_delta_mph");
}

void TimeBinConfig::validate() const
{
  check_hour(day_start, 23, "day_start");
  check_hour(day_end, 24, "day_end");
  check_hour(night_start, 23, "night_start");
  check_hour(night_end, 24, "night_end");
  if (day_start == day_end % 24)
    throw ConfigError("time bin: day window is empty");
  if (night_start == night_end % 24)
    throw ConfigError("time bin: night window is empty");
  for (int h = 0; h < 24; ++h) {
    if (in_window(h, day_start, day_end) && in_window(h, night_start, night_end))
      throw ConfigError("time bin: day and night windows overlap at hour " + std::to_string(h));
  }
  if (utc_offset_minutes < -18 * 60 || utc_offset_minutes > 18 * 60)
    throw ConfigError("time bin: utc_offset_minutes must be within +/-1080");
}

std::string_view to_string(TimeBin bin)
{
  switch (bin) {
    case TimeBin::Day: return "day";
    case TimeBin::Night: return "night";
    case TimeBin::Other: return "other";
  }
  return "other";
}

bool filter_postal(const TrajectoryPoint& point, const std::set<std::string, std::less<>>& allowed)
{
  return allowed.contains(point.postal_code);
}

bool is_residential(const WayRecord& way) { return way.highway_class == "residential"; }

EffectiveLimit effective_speed_limit(const WayRecord* way, const SpeedPolicy& policy)
{
  if (way && way->maxspeed_kmh)
    return {*way->maxspeed_kmh, false};
  const double exact = policy.default_limit_mph * kKmhPerMph;
  if (policy.limit_rounding == LimitRounding::Rounded)
    return {std::round(exact), true};
  return {exact, true};
}

SpeedThresholds speed_thresholds(double limit_kmh, const SpeedPolicy& policy)
{
  constexpr double fixed_range = 1e6;  // keeps the scaled sum well inside int64
  const double agg_delta = policy.aggressive_delta_mph * kKmhPerMph;
  const double reck_delta = policy.reckless_delta_mph * kKmhPerMph;
  if (!(limit_kmh < fixed_range && reck_delta < fixed_range))
    return {limit_kmh + agg_delta, limit_kmh + reck_delta};
  const auto limit = to_fixed(limit_kmh);
  const auto aggressive = limit + to_fixed(agg_delta);
  const auto reckless = limit + to_fixed(reck_delta);
  return {static_cast<double>(aggressive) / kFixedScale, static_cast<double>(reckless) / kFixedScale};
}

SpeedFlags classify_speed(double speed_kmh, const SpeedThresholds& t)
{
  return {speed_kmh >= t.aggressive_kmh, speed_kmh >= t.reckless_kmh};
}

SpeedFlags classify_speed(double speed_kmh, double limit_kmh, const SpeedPolicy& policy)
{
  return classify_speed(speed_kmh, speed_thresholds(limit_kmh, policy));
}

std::int64_t local_second_of_day(std::int64_t timestamp, int utc_offset_minutes)
{
  constexpr std::int64_t day = 86400;
  const auto local = timestamp + static_cast<std::int64_t>(utc_offset_minutes) * 60;
  return ((local % day) + day) % day;
}

TimeBin time_bin(std::int64_t timestamp, const TimeBinConfig& cfg)
{
  const int hour = static_cast<int>(local_second_of_day(timestamp, cfg.utc_offset_minutes) / 3600);
  if (in_window(hour, cfg.day_start, cfg.day_end))
    return TimeBin::Day;
  if (in_window(hour, cfg.night_start, cfg.night_end))
    return TimeBin::Night;
  return TimeBin::Other;
}

namespace {

void reject_unknown_keys(const nlohmann::json& j, std::initializer_list<std::string_view> known, const char* what)
{
  if (!j.is_object())
    throw ConfigError(std::string(what) + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw ConfigError(std::string(what) + ": unknown key '" + key + "'");
  }
}

template <typename T>
void read_field(const nlohmann::json& j, const char* key, T& out, const char* what)
{
  const auto it = j.find(key);
  if (it == j.end())
    return;
  try {
    out = it->get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string(what) + ": '" + key + "' has the wrong type");
  }
}

}  // namespace

void read_json(const nlohmann::json& j, SpeedPolicy& policy)
{
  constexpr const char* what = "policy";
  reject_unknown_keys(j, {"default_limit_mph", "aggressive_delta_mph", "reckless_delta_mph", "limit_rounding"}, what);
  read_field(j, "default_limit_mph", policy.default_limit_mph, what);
  read_field(j, "aggressive_delta_mph", policy.aggressive_delta_mph, what);
  read_field(j, "reckless_delta_mph", policy.reckless_delta_mph, what);
  std::string rounding(to_string(policy.limit_rounding));
  read_field(j, "limit_rounding", rounding, what);
  policy.limit_rounding = limit_rounding_from_string(rounding);
}

void read_json(const nlohmann::json& j, TimeBinConfig& cfg)
{
  constexpr const char* what = "time_bins";
  reject_unknown_keys(j, {"day_start", "day_end", "night_start", "night_end", "utc_offset_minutes"}, what);
  read_field(j, "day_start", cfg.day_start, what);
  read_field(j, "day_end", cfg.day_end, what);
  read_field(j, "night_start", cfg.night_start, what);
  read_field(j, "night_end", cfg.night_end, what);
  read_field(j, "utc_offset_minutes", cfg.utc_offset_minutes, what);
}

nlohmann::json to_json(const SpeedPolicy& policy)
{
  return {{"default_limit_mph", policy.default_limit_mph},
          {"aggressive_delta_mph", policy.aggressive_delta_mph},
          {"reckless_delta_mph", policy.reckless_delta_mph},
          {"limit_rounding", to_string(policy.limit_rounding)}};
}

nlohmann::json to_json(const TimeBinConfig& cfg)
{
  return {{"day_start", cfg.day_start},
          {"day_end", cfg.day_end},
          {"night_start", cfg.night_start},
          {"night_end", cfg.night_end},
          {"utc_offset_minutes", cfg.utc_offset_minutes}};
}

}  // namespace speedwatch
