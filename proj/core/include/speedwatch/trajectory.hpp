#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "speedwatch/error.hpp"

namespace speedwatch {

/// One connected-vehicle observation (nominally every 3 s).
struct TrajectoryPoint
{
  std::int64_t timestamp = 0;  // epoch seconds, > 0
  double lat = 0.0;
  double lon = 0.0;
  double speed_kmh = 0.0;      // finite, >= 0, no upper cap
  std::uint64_t way_id = 0;
  std::string postal_code;

  friend bool operator==(const TrajectoryPoint&, const TrajectoryPoint&) = default;
};

enum class TrajectoryField : std::uint8_t { Timestamp, Lat, Lon, SpeedKmh, WayId, PostalCode };
inline constexpr std::size_t kTrajectoryFieldCount = 6;

std::string_view field_name(TrajectoryField field);

/// Canonical header of the trajectory CSV format.
inline constexpr std::string_view kTrajectoryHeader = "timestamp,lat,lon,speed_kmh,way_id,postal_code";

/// Column positions of each trajectory field within a row.
class TrajectorySchema
{
public:
  /// The canonical column order.
  TrajectorySchema();

  /// Builds a schema from a header line; columns may appear in any order,
  /// unknown extra columns are ignored. Throws DataError on a missing or
  /// repeated column.
  static TrajectorySchema from_header(std::string_view header);

  std::size_t column(TrajectoryField field) const { return columns_[static_cast<std::size_t>(field)]; }
  std::size_t width() const { return width_; }

private:
  std::array<std::size_t, kTrajectoryFieldCount> columns_{};
  std::size_t width_ = kTrajectoryFieldCount;
};

enum class RowErrorKind : std::uint8_t {
  MissingField,
  ExtraField,
  NonNumeric,
  OutOfRange,
  NegativeSpeed,
  NonFiniteSpeed,
};

std::string_view to_string(RowErrorKind kind);

struct RowError
{
  RowErrorKind kind = RowErrorKind::MissingField;
  TrajectoryField field = TrajectoryField::Timestamp;

  /// Stable key used in IngestStats::rejection_reasons, e.g. "OutOfRange(lat)".
  std::string reason() const;

  friend bool operator==(const RowError&, const RowError&) = default;
};

using RowResult = std::variant<TrajectoryPoint, RowError>;

RowResult parse_trajectory_row(std::string_view line, const TrajectorySchema& schema = {});

/// Serializes in canonical column order. Reals use the shortest round-trip form,
/// so parse(format(p)) == p for every accepted point.
std::string format_trajectory_row(const TrajectoryPoint& point);

struct IngestStats
{
  std::uint64_t rows_read = 0;
  std::uint64_t rows_accepted = 0;
  std::uint64_t rows_rejected = 0;
  std::map<std::string, std::uint64_t> rejection_reasons;

  void merge(const IngestStats& other);
  friend bool operator==(const IngestStats&, const IngestStats&) = default;
};

enum class ErrorPolicy : std::uint8_t { Skip, Strict };

/// Thrown in strict mode on the first malformed row.
class RowErrorException : public DataError
{
public:
  RowErrorException(RowError error, std::uint64_t line_number);

  const RowError& error() const { return error_; }
  std::uint64_t line_number() const { return line_number_; }

private:
  RowError error_;
  std::uint64_t line_number_;
};

/// Pull-style reader over a trajectory CSV stream. The first non-blank line is
/// the header; blank lines are ignored and not counted.
class TrajectoryReader
{
public:
  TrajectoryReader(std::istream& in, ErrorPolicy policy);

  /// Fills `out` with the next accepted point. Returns false at end of input.
  bool next(TrajectoryPoint& out);

  const IngestStats& stats() const { return stats_; }

private:
  std::istream& in_;
  ErrorPolicy policy_;
  TrajectorySchema schema_;
  bool have_header_ = false;
  std::uint64_t line_number_ = 0;
  std::string line_;
  IngestStats stats_;
};

/// Reads every accepted point of `in`, invoking `sink` in source order.
IngestStats stream_trajectories(std::istream& in, ErrorPolicy policy,
                                const std::function<void(TrajectoryPoint&&)>& sink);

/// Convenience: materializes a whole stream.
std::vector<TrajectoryPoint> read_trajectories(std::istream& in, ErrorPolicy policy,
                                               IngestStats* stats = nullptr);

void write_trajectories(std::ostream& out, const std::vector<TrajectoryPoint>& points);

}  // namespace speedwatch
