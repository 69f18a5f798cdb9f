#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "speedwatch/analytics.hpp"

namespace speedwatch {

inline constexpr std::string_view kCdfHeader = "value_percent,cum_fraction";
inline constexpr std::string_view kTopNHeader = "alias,total_rows,percent,avg_speed_kmh,speed_sd_kmh,speed_limit_kmh";
inline constexpr std::string_view kCrashFrequencyHeader = "crash_count,way_count";

void write_cdf_csv(const CdfSeries& series, std::ostream& out);

/// Published-table style: reals rounded to two decimals, aliases only.
void write_top_n_csv(const AnonymizedTable& table, std::ostream& out);

/// One row per crash count in ascending order, then `no_info,<n>`.
void write_crash_frequency_csv(const CrashFrequencyTable& table, std::ostream& out);

nlohmann::json day_night_json(const DayNightResult& result);

/// Self-contained SVG step plot of an empirical CDF: x is the speeding
/// percentage on [0, 100], y the cumulative share of ways on [0, 1].
/// The curve is a single <polyline>.
std::string render_cdf_svg(const CdfSeries& series);

/// Throws IoError if `path` cannot be written.
void emit_cdf_svg(const CdfSeries& series, const std::filesystem::path& path);

/// Writes `content` to a sibling temp file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace speedwatch
