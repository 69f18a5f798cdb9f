#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "speedwatch/aggregate.hpp"
#include "speedwatch/analytics.hpp"
#include "speedwatch/oracle.hpp"
#include "speedwatch/osm_ways.hpp"
#include "speedwatch/policy.hpp"
#include "speedwatch/trajectory.hpp"

namespace speedwatch {

struct PipelineConfig
{
  std::filesystem::path trajectories;
  std::filesystem::path way_table;
  std::filesystem::path summary_out;
  std::filesystem::path report_out;

  std::set<std::string, std::less<>> postal_codes;
  bool residential_only = true;
  SpeedPolicy policy;
  TimeBinConfig time_bins;
  std::uint64_t min_observations = 100;
  std::size_t top_n = 10;
  ErrorPolicy error_policy = ErrorPolicy::Skip;
  std::optional<std::int64_t> window_start;  // inclusive epoch seconds
  std::optional<std::int64_t> window_end;    // exclusive
  std::optional<double> speed_flag_kmh;      // advisory marker only; never drops points

  /// Throws ConfigError. Paths are not checked here; from_json requires them.
  void validate() const;

  /// Relative paths are resolved against `base_dir`. Unknown keys are rejected.
  static PipelineConfig from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
  nlohmann::json to_json() const;

  OracleConfig oracle_config() const;
};

/// Rows remaining after each step of the filter cascade.
struct StageCounts
{
  std::uint64_t ingested = 0;
  std::uint64_t after_time_window = 0;
  std::uint64_t after_postal = 0;
  std::uint64_t after_way_match = 0;
  std::uint64_t after_residential = 0;
};

struct RunReport
{
  IngestStats ingest;
  StageCounts stages;
  std::uint64_t imputed_limit_points = 0;
  std::uint64_t flagged_points = 0;
  std::uint64_t summary_count = 0;
  std::uint64_t imputed_limit_ways = 0;
  std::uint64_t analyzed_ways = 0;           // summaries with >= min_observations rows
  std::uint64_t analyzed_imputed_ways = 0;
  nlohmann::json analytics;                  // see analytics_report()

  double imputed_limit_share() const;
  double analyzed_imputed_limit_share() const;
  nlohmann::json to_json(const PipelineConfig& config) const;
};

struct PipelineResult
{
  std::vector<WaySummary> summaries;
  RunReport report;
};

/// ingest -> time window -> postal -> way match -> residential -> limit
/// augmentation -> classification -> aggregation.
PipelineResult run_pipeline(const PipelineConfig& config, std::istream& trajectories, const WayTable& ways);

/// Network-level analytics over a summary set: tail shares and CDF anchors
/// per metric, top-N tables with one alias map, and the day/night tally.
/// Summaries are filtered by `min_observations` first.
nlohmann::json analytics_report(std::span<const WaySummary> summaries, std::uint64_t min_observations,
                                std::size_t top_n, const std::vector<Metric>& metrics);

}  // namespace speedwatch
