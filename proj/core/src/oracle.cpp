#include "speedwatch/oracle.hpp"

#include <chrono>
#include <cmath>
#include <map>

namespace speedwatch {

namespace {

int local_hour(std::int64_t timestamp, int utc_offset_minutes)
{
  using namespace std::chrono;
  const sys_seconds local{seconds{timestamp} + minutes{utc_offset_minutes}};
  const hh_mm_ss clock{local - floor<days>(local)};
  return static_cast<int>(clock.hours().count());
}

bool hour_in(int hour, int start, int end)
{
  if (start < end)
    return start <= hour && hour < end;
  return hour >= start || hour < end;
}

}  // namespace

std::vector<WaySummary> oracle_summarize(const std::vector<TrajectoryPoint>& points, const WayTable& ways,
                                         const OracleConfig& cfg)
{
  std::map<std::uint64_t, std::vector<const TrajectoryPoint*>> by_way;
  for (const auto& p : points) {
    if (cfg.window_start && p.timestamp < *cfg.window_start)
      continue;
    if (cfg.window_end && p.timestamp >= *cfg.window_end)
      continue;
    if (!cfg.postal_codes.contains(p.postal_code))
      continue;
    const WayRecord* way = ways.find(p.way_id);
    if (!way)
      continue;
    if (cfg.residential_only && way->highway_class != "residential")
      continue;
    by_way[p.way_id].push_back(&p);
  }

  const auto& pol = cfg.policy;
  const auto& tb = cfg.time_bins;
  std::vector<WaySummary> out;
  for (const auto& [way_id, pts] : by_way) {
    const WayRecord& way = *ways.find(way_id);
    double limit = 0.0;
    if (way.maxspeed_kmh)
      limit = *way.maxspeed_kmh;
    else if (pol.limit_rounding == LimitRounding::Rounded)
      limit = std::round(pol.default_limit_mph * 1.609344);
    else
      limit = pol.default_limit_mph * 1.609344;
    const double aggressive_at = limit + pol.aggressive_delta_mph * 1.609344;
    const double reckless_at = limit + pol.reckless_delta_mph * 1.609344;

    WaySummary s;
    s.osm_way_id = way_id;
    s.added_speed_limit = limit;
    s.total_row_number = pts.size();

    double sum = 0.0;
    for (const auto* p : pts) {
      sum += p->speed_kmh;
      const bool aggressive = p->speed_kmh >= aggressive_at;
      const bool reckless = p->speed_kmh >= reckless_at;
      const int hour = local_hour(p->timestamp, tb.utc_offset_minutes);
      const bool day = hour_in(hour, tb.day_start, tb.day_end);
      const bool night = !day && hour_in(hour, tb.night_start, tb.night_end);
      if (aggressive)
        ++s.aggressive_speeding_row_number;
      if (reckless)
        ++s.reckless_speeding_row_number;
      if (day) {
        ++s.total_morning_count;
        if (aggressive)
          ++s.morning_speeding_count;
      }
      if (night) {
        ++s.total_night_count;
        if (aggressive)
          ++s.night_speeding_count;
      }
    }
    const double n = static_cast<double>(pts.size());
    s.way_id_avg_speed = sum / n;
    if (pts.size() >= 2) {
      double ss = 0.0;
      for (const auto* p : pts)
        ss += (p->speed_kmh - s.way_id_avg_speed) * (p->speed_kmh - s.way_id_avg_speed);
      s.way_id_speed_sd = std::sqrt(ss / (n - 1.0));
    }
    s.aggressive_speeding_percent = static_cast<double>(s.aggressive_speeding_row_number) * 100.0 / n;
    s.reckless_speeding_percent = static_cast<double>(s.reckless_speeding_row_number) * 100.0 / n;
    out.push_back(s);
  }
  return out;
}

std::vector<WaySummary> oracle_summarize(std::istream& trajectories_csv, const WayTable& ways,
                                         const OracleConfig& cfg)
{
  return oracle_summarize(read_trajectories(trajectories_csv, ErrorPolicy::Skip), ways, cfg);
}

}  // namespace speedwatch
