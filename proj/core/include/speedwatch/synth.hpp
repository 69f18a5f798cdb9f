#pragma once

// Labeled synthetic datasets: every generated point's aggressive/reckless
// label and time bin are fixed by construction, and the ground truth is the
// tally of those labels.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "speedwatch/error.hpp"
#include "speedwatch/osm_ways.hpp"
#include "speedwatch/policy.hpp"
#include "speedwatch/trajectory.hpp"

namespace speedwatch {

class InvalidScenario : public ConfigError
{
public:
  using ConfigError::ConfigError;
};

struct SynthWay
{
  std::uint64_t way_id = 0;
  std::string highway_class = "residential";
  std::optional<std::string> maxspeed_raw;
  std::uint64_t points = 0;
  double day_fraction = 0.4;
  double night_fraction = 0.3;
  double other_fraction = 0.3;
  double aggressive_rate_day = 0.0;
  double aggressive_rate_night = 0.0;
  std::optional<double> aggressive_rate_other;  // defaults to aggressive_rate_day
  double reckless_share_of_aggressive = 0.0;
};

struct SynthScenario
{
  std::vector<SynthWay> ways;
  std::vector<std::string> postal_codes = {"22901"};
  std::vector<std::string> foreign_postal_codes;
  double foreign_fraction = 0.0;       // extra out-of-area rows, relative to in-area rows
  std::uint64_t unmatched_points = 0;  // in-area rows on way IDs absent from the way table
  std::uint64_t seed = 1;
  std::int64_t start_epoch = 1648785600;  // 2022-04-01 00:00 EDT
  std::int64_t end_epoch = 1648785600 + 14 * 86400;
  SpeedPolicy policy;
  TimeBinConfig time_bins;

  /// Throws InvalidScenario.
  void validate() const;
};

SynthScenario scenario_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SynthScenario& scenario);

struct WayTruth
{
  std::string highway_class;
  std::uint64_t n = 0;
  std::uint64_t day_n = 0;
  std::uint64_t night_n = 0;
  std::uint64_t aggressive_n = 0;
  std::uint64_t reckless_n = 0;
  std::uint64_t day_aggressive_n = 0;
  std::uint64_t night_aggressive_n = 0;

  friend bool operator==(const WayTruth&, const WayTruth&) = default;
};

/// Expected counters per way over in-area rows only.
struct GroundTruth
{
  std::map<std::uint64_t, WayTruth> ways;

  nlohmann::json to_json() const;
  static GroundTruth from_json(const nlohmann::json& j);
};

struct SynthDataset
{
  std::vector<TrajectoryPoint> trajectories;  // sorted by timestamp
  WayTable ways;
  GroundTruth truth;
};

/// Deterministic in (scenario, seed). Throws InvalidScenario.
SynthDataset generate(const SynthScenario& scenario, std::uint64_t seed);

/// Writes trajectories.csv, ways.csv and ground_truth.json into `out_dir`.
void write_dataset(const SynthDataset& dataset, const std::filesystem::path& out_dir);

struct RandomScenarioOptions
{
  std::size_t ways = 60;
  std::uint64_t points = 10'000;
  double residential_share = 0.85;
  double foreign_fraction = 0.05;
  std::uint64_t unmatched_points = 40;
};

/// A randomized but plausible scenario (skewed speeding rates, some sparse
/// ways, a few posted limits).
SynthScenario random_scenario(std::uint64_t seed, const RandomScenarioOptions& options = {});

}  // namespace speedwatch
