#pragma once

// Implementations of the CLI subcommands. Each returns a process exit code
// and reports progress and errors to `log`.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "speedwatch/analytics.hpp"
#include "speedwatch/policy.hpp"

namespace speedwatch {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;  // configuration, usage, or unreadable/unwritable files
inline constexpr int kExitData = 3;   // malformed input data (strict-mode row errors, bad XML/CSV)

int cmd_enrich(const std::filesystem::path& osm_xml, const std::filesystem::path& out_way_table, std::ostream& log);

struct AnalyzeOverrides
{
  bool strict = false;
  std::optional<std::uint64_t> min_observations;
  std::optional<std::size_t> top_n;
  std::optional<LimitRounding> rounding;
};

int cmd_analyze(const std::filesystem::path& config_path, const AnalyzeOverrides& overrides, std::ostream& log);

struct ReportOptions
{
  std::filesystem::path summary_csv;
  std::filesystem::path out_dir;
  std::optional<std::filesystem::path> config;  // supplies min_observations / top_n defaults
  std::vector<Metric> metrics = {Metric::Aggressive, Metric::Reckless};
  std::optional<std::uint64_t> min_observations;
  std::optional<std::size_t> top_n;
};

int cmd_report(const ReportOptions& options, std::ostream& log);

int cmd_synth(const std::filesystem::path& scenario_path, const std::filesystem::path& out_dir,
              std::optional<std::uint64_t> seed, std::ostream& log);

int cmd_crash(const std::filesystem::path& crash_csv, const std::filesystem::path& way_table,
              const std::filesystem::path& out_path, std::ostream& log);

}  // namespace speedwatch
