#include "speedwatch/aggregate.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "speedwatch/text.hpp"

namespace speedwatch {

WayAccumulator::WayAccumulator(std::uint64_t way_id, double limit_kmh, bool limit_imputed)
  : way_id_(way_id)
  , limit_kmh_(limit_kmh)
  , limit_imputed_(limit_imputed)
{}

void WayAccumulator::check_compatible(std::uint64_t way_id, double limit_kmh) const
{
  if (way_id != way_id_)
    throw WayMismatch("way " + std::to_string(way_id) + " fed to accumulator of way " + std::to_string(way_id_));
  if (limit_kmh != limit_kmh_)
    throw WayMismatch("way " + std::to_string(way_id_) + ": inconsistent speed limit");
}

void WayAccumulator::add(const ClassifiedPoint& cp)
{
  check_compatible(cp.point.way_id, cp.limit_kmh);

  ++n_;
  if (cp.flags.aggressive)
    ++aggressive_n_;
  if (cp.flags.reckless)
    ++reckless_n_;
  if (cp.bin == TimeBin::Day) {
    ++day_n_;
    if (cp.flags.aggressive)
      ++day_aggressive_n_;
  } else if (cp.bin == TimeBin::Night) {
    ++night_n_;
    if (cp.flags.aggressive)
      ++night_aggressive_n_;
  }

  const double delta = cp.point.speed_kmh - mean_;
  mean_ += delta / static_cast<double>(n_);
  m2_ += delta * (cp.point.speed_kmh - mean_);
}

void WayAccumulator::merge(const WayAccumulator& other)
{
  check_compatible(other.way_id_, other.limit_kmh_);
  if (other.n_ == 0)
    return;
  if (n_ == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(n_);
  const double nb = static_cast<double>(other.n_);
  const double n = na + nb;
  const double delta = other.mean_ - mean_;
  mean_ = (na * mean_ + nb * other.mean_) / n;
  m2_ += other.m2_ + delta * delta * na * nb / n;

  n_ += other.n_;
  day_n_ += other.day_n_;
  night_n_ += other.night_n_;
  day_aggressive_n_ += other.day_aggressive_n_;
  night_aggressive_n_ += other.night_aggressive_n_;
  aggressive_n_ += other.aggressive_n_;
  reckless_n_ += other.reckless_n_;
}

WaySummary WayAccumulator::finalize() const
{
  if (n_ == 0)
    throw EmptyAccumulator("way " + std::to_string(way_id_) + " has no observations");

  WaySummary s;
  s.osm_way_id = way_id_;
  s.total_row_number = n_;
  s.added_speed_limit = limit_kmh_;
  s.total_morning_count = day_n_;
  s.total_night_count = night_n_;
  s.morning_speeding_count = day_aggressive_n_;
  s.night_speeding_count = night_aggressive_n_;
  s.way_id_avg_speed = mean_;
  if (n_ >= 2)
    s.way_id_speed_sd = std::sqrt(std::max(m2_, 0.0) / static_cast<double>(n_ - 1));
  s.aggressive_speeding_row_number = aggressive_n_;
  s.reckless_speeding_row_number = reckless_n_;
  s.aggressive_speeding_percent = percent_of(aggressive_n_, n_);
  s.reckless_speeding_percent = percent_of(reckless_n_, n_);
  return s;
}

WayAccumulator accumulate(WayAccumulator acc, const ClassifiedPoint& cp)
{
  acc.add(cp);
  return acc;
}

WayAccumulator merge(WayAccumulator a, const WayAccumulator& b)
{
  a.merge(b);
  return a;
}

WaySummary finalize(const WayAccumulator& acc) { return acc.finalize(); }

void WayAggregator::add(const ClassifiedPoint& cp)
{
  auto it = ways_.find(cp.point.way_id);
  if (it == ways_.end())
    it = ways_.emplace(cp.point.way_id, WayAccumulator(cp.point.way_id, cp.limit_kmh, cp.limit_imputed)).first;
  it->second.add(cp);
  ++points_;
}

void WayAggregator::merge(const WayAggregator& other)
{
  for (const auto& [id, acc] : other.ways_) {
    auto it = ways_.find(id);
    if (it == ways_.end())
      ways_.emplace(id, acc);
    else
      it->second.merge(acc);
  }
  points_ += other.points_;
}

std::vector<WaySummary> WayAggregator::finalize() const
{
  std::vector<WaySummary> out;
  out.reserve(ways_.size());
  for (const auto& [id, acc] : ways_)
    out.push_back(acc.finalize());
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.osm_way_id < b.osm_way_id; });
  return out;
}

std::vector<WaySummary> aggregate_stream(std::span<const ClassifiedPoint> points)
{
  WayAggregator agg;
  for (const auto& cp : points)
    agg.add(cp);
  return agg.finalize();
}

double percent_of(std::uint64_t count, std::uint64_t total)
{
  return 100.0 * static_cast<double>(count) / static_cast<double>(total);
}

void write_summary_csv(std::span<const WaySummary> summaries, std::ostream& out)
{
  using text::format_real;
  out << kSummaryHeader << '\n';
  for (const auto& s : summaries) {
    out << s.osm_way_id << ',' << s.total_row_number << ',' << format_real(s.added_speed_limit, 2) << ','
        << s.total_morning_count << ',' << s.total_night_count << ',' << s.morning_speeding_count << ','
        << s.night_speeding_count << ',' << format_real(s.way_id_avg_speed, 2) << ','
        << (s.way_id_speed_sd ? format_real(*s.way_id_speed_sd, 2) : std::string()) << ','
        << s.aggressive_speeding_row_number << ',' << s.reckless_speeding_row_number << ','
        << format_real(s.aggressive_speeding_percent, 2) << ',' << format_real(s.reckless_speeding_percent, 2)
        << '\n';
  }
}

namespace {

[[noreturn]] void malformed(std::uint64_t line, const std::string& what)
{
  throw DataError("summary line " + std::to_string(line) + ": MalformedRow: " + what);
}

}  // namespace

std::vector<WaySummary> read_summary_csv(std::istream& in)
{
  std::vector<WaySummary> out;
  std::string line;
  std::vector<std::string> f;
  std::uint64_t line_no = 0;
  bool header = false;

  while (std::getline(in, line)) {
    ++line_no;
    text::chomp(line);
    if (text::trim(line).empty())
      continue;
    if (!header) {
      if (line != kSummaryHeader)
        malformed(line_no, "unexpected header");
      header = true;
      continue;
    }
    if (!text::split_csv(line, f) || f.size() != 13)
      malformed(line_no, "expected 13 fields");

    auto u64 = [&](std::size_t i) {
      const auto v = text::parse_u64(f[i]);
      if (!v)
        malformed(line_no, "field " + std::to_string(i + 1) + " is not a count");
      return *v;
    };
    auto real = [&](std::size_t i) {
      const auto v = text::parse_double(f[i]);
      if (!v || !std::isfinite(*v))
        malformed(line_no, "field " + std::to_string(i + 1) + " is not a number");
      return *v;
    };

    WaySummary s;
    s.osm_way_id = u64(0);
    s.total_row_number = u64(1);
    s.added_speed_limit = real(2);
    s.total_morning_count = u64(3);
    s.total_night_count = u64(4);
    s.morning_speeding_count = u64(5);
    s.night_speeding_count = u64(6);
    s.way_id_avg_speed = real(7);
    if (!text::trim(f[8]).empty())
      s.way_id_speed_sd = real(8);
    s.aggressive_speeding_row_number = u64(9);
    s.reckless_speeding_row_number = u64(10);
    s.aggressive_speeding_percent = real(11);
    s.reckless_speeding_percent = real(12);

    if (s.total_row_number == 0)
      malformed(line_no, "total_row_number is zero");
    if (s.reckless_speeding_row_number > s.aggressive_speeding_row_number ||
        s.aggressive_speeding_row_number > s.total_row_number ||
        s.total_morning_count + s.total_night_count > s.total_row_number ||
        s.morning_speeding_count > s.total_morning_count || s.night_speeding_count > s.total_night_count)
      malformed(line_no, "counters violate nesting");
    out.push_back(s);
  }
  if (in.bad())
    throw IoError("summary stream unreadable");
  if (!header)
    malformed(line_no, "missing header");
  return out;
}

}  // namespace speedwatch
