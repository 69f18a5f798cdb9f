#include "speedwatch/trajectory.hpp"

#include <cmath>
#include <istream>
#include <ostream>

#include "speedwatch/text.hpp"

namespace speedwatch {

namespace {

constexpr std::array<std::string_view, kTrajectoryFieldCount> kFieldNames = {
  "timestamp", "lat", "lon", "speed_kmh", "way_id", "postal_code"};

RowError row_error(RowErrorKind kind, TrajectoryField field) { return RowError{kind, field}; }

}  // namespace

std::string_view field_name(TrajectoryField field) { return kFieldNames[static_cast<std::size_t>(field)]; }

std::string_view to_string(RowErrorKind kind)
{
  switch (kind) {
    case RowErrorKind::MissingField: return "MissingField";
    case RowErrorKind::ExtraField: return "ExtraField";
    case RowErrorKind::NonNumeric: return "NonNumeric";
    case RowErrorKind::OutOfRange: return "OutOfRange";
    case RowErrorKind::NegativeSpeed: return "NegativeSpeed";
    case RowErrorKind::NonFiniteSpeed: return "NonFiniteSpeed";
  }
  return "Unknown";
}

std::string RowError::reason() const
{
  std::string out(to_string(kind));
  if (kind != RowErrorKind::ExtraField) {
    out += '(';
    out += field_name(field);
    out += ')';
  }
  return out;
}

TrajectorySchema::TrajectorySchema()
{
  for (std::size_t i = 0; i < kTrajectoryFieldCount; ++i)
    columns_[i] = i;
}

TrajectorySchema TrajectorySchema::from_header(std::string_view header)
{
  std::vector<std::string> cols;
  if (!text::split_csv(header, cols))
    throw DataError("trajectory header: unterminated quote");

  constexpr std::size_t unset = static_cast<std::size_t>(-1);
  TrajectorySchema schema;
  schema.columns_.fill(unset);
  schema.width_ = cols.size();
  for (std::size_t c = 0; c < cols.size(); ++c) {
    const auto name = text::trim(cols[c]);
    for (std::size_t f = 0; f < kTrajectoryFieldCount; ++f) {
      if (name != kFieldNames[f])
        continue;
      if (schema.columns_[f] != unset)
        throw DataError("trajectory header: duplicate column '" + std::string(name) + "'");
      schema.columns_[f] = c;
    }
  }
  for (std::size_t f = 0; f < kTrajectoryFieldCount; ++f) {
    if (schema.columns_[f] == unset)
      throw DataError("trajectory header: missing column '" + std::string(kFieldNames[f]) + "'");
  }
  return schema;
}

RowResult parse_trajectory_row(std::string_view line, const TrajectorySchema& schema)
{
  thread_local std::vector<std::string> fields;
  if (!text::split_csv(line, fields))
    return row_error(RowErrorKind::NonNumeric, TrajectoryField::PostalCode);

  if (fields.size() > schema.width())
    return row_error(RowErrorKind::ExtraField, TrajectoryField::PostalCode);

  auto get = [&](TrajectoryField f) -> const std::string* {
    const auto col = schema.column(f);
    if (col >= fields.size() || text::trim(fields[col]).empty())
      return nullptr;
    return &fields[col];
  };

  for (std::size_t f = 0; f < kTrajectoryFieldCount; ++f) {
    if (!get(static_cast<TrajectoryField>(f)))
      return row_error(RowErrorKind::MissingField, static_cast<TrajectoryField>(f));
  }

  TrajectoryPoint p;

  const auto ts = text::parse_i64(*get(TrajectoryField::Timestamp));
  if (!ts)
    return row_error(RowErrorKind::NonNumeric, TrajectoryField::Timestamp);
  if (*ts <= 0)
    return row_error(RowErrorKind::OutOfRange, TrajectoryField::Timestamp);
  p.timestamp = *ts;

  const auto lat = text::parse_double(*get(TrajectoryField::Lat));
  if (!lat)
    return row_error(RowErrorKind::NonNumeric, TrajectoryField::Lat);
  if (!(*lat >= -90.0 && *lat <= 90.0))
    return row_error(RowErrorKind::OutOfRange, TrajectoryField::Lat);
  p.lat = *lat;

  const auto lon = text::parse_double(*get(TrajectoryField::Lon));
  if (!lon)
    return row_error(RowErrorKind::NonNumeric, TrajectoryField::Lon);
  if (!(*lon >= -180.0 && *lon <= 180.0))
    return row_error(RowErrorKind::OutOfRange, TrajectoryField::Lon);
  p.lon = *lon;

  const auto speed = text::parse_double(*get(TrajectoryField::SpeedKmh));
  if (!speed)
    return row_error(RowErrorKind::NonNumeric, TrajectoryField::SpeedKmh);
  if (!std::isfinite(*speed))
    return row_error(RowErrorKind::NonFiniteSpeed, TrajectoryField::SpeedKmh);
  if (*speed < 0.0)
    return row_error(RowErrorKind::NegativeSpeed, TrajectoryField::SpeedKmh);
  // -0.0 compares equal to 0.0 but would not survive a textual round trip.
  p.speed_kmh = *speed == 0.0 ? 0.0 : *speed;

  const auto way = text::parse_u64(*get(TrajectoryField::WayId));
  if (!way)
    return row_error(RowErrorKind::NonNumeric, TrajectoryField::WayId);
  p.way_id = *way;

  p.postal_code = std::string(text::trim(*get(TrajectoryField::PostalCode)));
  return p;
}

std::string format_trajectory_row(const TrajectoryPoint& p)
{
  std::string out;
  out.reserve(64);
  out += std::to_string(p.timestamp);
  out += ',';
  out += text::format_real(p.lat);
  out += ',';
  out += text::format_real(p.lon);
  out += ',';
  out += text::format_real(p.speed_kmh);
  out += ',';
  out += std::to_string(p.way_id);
  out += ',';
  out += text::quote_csv(p.postal_code);
  return out;
}

void IngestStats::merge(const IngestStats& other)
{
  rows_read += other.rows_read;
  rows_accepted += other.rows_accepted;
  rows_rejected += other.rows_rejected;
  for (const auto& [reason, count] : other.rejection_reasons)
    rejection_reasons[reason] += count;
}

RowErrorException::RowErrorException(RowError error, std::uint64_t line_number)
  : DataError("line " + std::to_string(line_number) + ": " + error.reason())
  , error_(error)
  , line_number_(line_number)
{}

TrajectoryReader::TrajectoryReader(std::istream& in, ErrorPolicy policy)
  : in_(in)
  , policy_(policy)
{}

bool TrajectoryReader::next(TrajectoryPoint& out)
{
  while (std::getline(in_, line_)) {
    ++line_number_;
    text::chomp(line_);
    if (text::trim(line_).empty())
      continue;
    if (!have_header_) {
      schema_ = TrajectorySchema::from_header(line_);
      have_header_ = true;
      continue;
    }
    ++stats_.rows_read;
    auto result = parse_trajectory_row(line_, schema_);
    if (auto* point = std::get_if<TrajectoryPoint>(&result)) {
      ++stats_.rows_accepted;
      out = std::move(*point);
      return true;
    }
    const auto& error = std::get<RowError>(result);
    ++stats_.rows_rejected;
    ++stats_.rejection_reasons[error.reason()];
    if (policy_ == ErrorPolicy::Strict)
      throw RowErrorException(error, line_number_);
  }
  if (in_.bad())
    throw IoError("trajectory stream unreadable");
  return false;
}

IngestStats stream_trajectories(std::istream& in, ErrorPolicy policy,
                                const std::function<void(TrajectoryPoint&&)>& sink)
{
  TrajectoryReader reader(in, policy);
  TrajectoryPoint p;
  while (reader.next(p))
    sink(std::move(p));
  return reader.stats();
}

std::vector<TrajectoryPoint> read_trajectories(std::istream& in, ErrorPolicy policy, IngestStats* stats)
{
  std::vector<TrajectoryPoint> points;
  auto s = stream_trajectories(in, policy, [&](TrajectoryPoint&& p) { points.push_back(std::move(p)); });
  if (stats)
    *stats = std::move(s);
  return points;
}

void write_trajectories(std::ostream& out, const std::vector<TrajectoryPoint>& points)
{
  out << kTrajectoryHeader << '\n';
  for (const auto& p : points)
    out << format_trajectory_row(p) << '\n';
}

}  // namespace speedwatch
