#pragma once

// Reference implementation of the way-summary math: everything is
// materialized, statistics are two-pass, nothing is streamed or merged.
// It shares types with the pipeline but none of its classification or
// accumulation code.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "speedwatch/aggregate.hpp"
#include "speedwatch/osm_ways.hpp"
#include "speedwatch/policy.hpp"
#include "speedwatch/trajectory.hpp"

namespace speedwatch {

struct OracleConfig
{
  std::set<std::string, std::less<>> postal_codes;
  bool residential_only = true;
  SpeedPolicy policy;
  TimeBinConfig time_bins;
  std::optional<std::int64_t> window_start;  // inclusive
  std::optional<std::int64_t> window_end;    // exclusive
};

std::vector<WaySummary> oracle_summarize(const std::vector<TrajectoryPoint>& points, const WayTable& ways,
                                         const OracleConfig& cfg);

/// Parses a trajectory CSV (malformed rows skipped) and summarizes it.
std::vector<WaySummary> oracle_summarize(std::istream& trajectories_csv, const WayTable& ways,
                                         const OracleConfig& cfg);

}  // namespace speedwatch
