#include "speedwatch/analytics.hpp"

#include <algorithm>
#include <istream>

#include "speedwatch/policy.hpp"
#include "speedwatch/text.hpp"

namespace speedwatch {

namespace {
__extension__ using u128 = unsigned __int128;
}  // namespace

std::string_view to_string(Metric metric) { return metric == Metric::Aggressive ? "aggressive" : "reckless"; }

Metric metric_from_string(std::string_view name)
{
  if (name == "aggressive")
    return Metric::Aggressive;
  if (name == "reckless")
    return Metric::Reckless;
  throw ConfigError("unknown metric '" + std::string(name) + "' (expected aggressive|reckless)");
}

double metric_value(const WaySummary& s, Metric metric)
{
  return metric == Metric::Aggressive ? s.aggressive_speeding_percent : s.reckless_speeding_percent;
}

double CdfSeries::at(double x) const
{
  const auto it = std::upper_bound(points.begin(), points.end(), x,
                                   [](double v, const CdfPoint& p) { return v < p.value_percent; });
  return it == points.begin() ? 0.0 : std::prev(it)->cum_fraction;
}

std::vector<WaySummary> filter_min_observations(std::span<const WaySummary> summaries, std::uint64_t min_rows)
{
  std::vector<WaySummary> out;
  std::copy_if(summaries.begin(), summaries.end(), std::back_inserter(out),
               [&](const WaySummary& s) { return s.total_row_number >= min_rows; });
  return out;
}

CdfSeries compute_cdf(std::span<const WaySummary> summaries, Metric metric)
{
  if (summaries.empty())
    throw EmptyInput("CDF of an empty summary set");

  std::vector<double> values;
  values.reserve(summaries.size());
  for (const auto& s : summaries)
    values.push_back(metric_value(s, metric));
  std::sort(values.begin(), values.end());

  CdfSeries series;
  series.metric_name = std::string(to_string(metric)) + " speeding %";
  const double total = static_cast<double>(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i + 1 < values.size() && values[i + 1] == values[i])
      continue;
    series.points.push_back({values[i], static_cast<double>(i + 1) / total});
  }
  return series;
}

double fraction_exceeding(std::span<const WaySummary> summaries, Metric metric, double x)
{
  if (summaries.empty())
    throw EmptyInput("fraction_exceeding over an empty summary set");
  const auto count = std::count_if(summaries.begin(), summaries.end(), [&](const WaySummary& s) {
    const double v = metric_value(s, metric);
    return x == 0.0 ? v > 0.0 : v >= x;
  });
  return static_cast<double>(count) / static_cast<double>(summaries.size());
}

std::string alias_letters(std::size_t index)
{
  std::string out;
  ++index;
  while (index > 0) {
    --index;
    out.insert(out.begin(), static_cast<char>('a' + index % 26));
    index /= 26;
  }
  return out;
}

const std::string& AliasMap::alias_for(std::uint64_t way_id)
{
  auto it = aliases_.find(way_id);
  if (it == aliases_.end()) {
    it = aliases_.emplace(way_id, alias_letters(order_.size())).first;
    order_.push_back(way_id);
  }
  return it->second;
}

const std::string* AliasMap::find(std::uint64_t way_id) const
{
  const auto it = aliases_.find(way_id);
  return it == aliases_.end() ? nullptr : &it->second;
}

std::vector<std::pair<std::uint64_t, std::string>> AliasMap::entries() const
{
  std::vector<std::pair<std::uint64_t, std::string>> out;
  out.reserve(order_.size());
  for (auto id : order_)
    out.emplace_back(id, aliases_.at(id));
  return out;
}

AliasMap anonymize(const std::vector<std::vector<std::uint64_t>>& tables)
{
  AliasMap map;
  for (const auto& table : tables) {
    for (auto id : table)
      map.alias_for(id);
  }
  return map;
}

std::vector<WaySummary> rank_by_metric(std::span<const WaySummary> summaries, Metric metric)
{
  std::vector<WaySummary> out(summaries.begin(), summaries.end());
  std::sort(out.begin(), out.end(), [metric](const WaySummary& a, const WaySummary& b) {
    const double va = metric_value(a, metric);
    const double vb = metric_value(b, metric);
    if (va != vb)
      return va > vb;
    if (a.total_row_number != b.total_row_number)
      return a.total_row_number > b.total_row_number;
    return a.osm_way_id < b.osm_way_id;
  });
  return out;
}

AnonymizedTable top_n(std::span<const WaySummary> summaries, Metric metric, std::size_t n, AliasMap& aliases)
{
  AnonymizedTable table;
  table.metric = metric;
  auto ranked = rank_by_metric(summaries, metric);
  if (ranked.size() > n)
    ranked.resize(n);
  for (const auto& s : ranked) {
    table.rows.push_back({aliases.alias_for(s.osm_way_id), s.osm_way_id, s.total_row_number,
                          metric_value(s, metric), s.way_id_avg_speed, s.way_id_speed_sd, s.added_speed_limit});
  }
  return table;
}

DayNightResult day_night_comparison(std::span<const WaySummary> summaries)
{
  DayNightResult r;
  for (const auto& s : summaries) {
    if (s.total_morning_count == 0 || s.total_night_count == 0) {
      ++r.excluded;
      continue;
    }
    // day/day_n vs night/night_n, cross-multiplied to stay in integers.
    const auto day = static_cast<u128>(s.morning_speeding_count) * s.total_night_count;
    const auto night = static_cast<u128>(s.night_speeding_count) * s.total_morning_count;
    if (day > night)
      ++r.higher_day;
    else if (night > day)
      ++r.higher_night;
    else
      ++r.excluded;
  }
  return r;
}

CrashFrequencyTable crash_frequency(std::span<const CrashRecord> crashes, const WayTable& ways)
{
  CrashFrequencyTable table;
  std::map<std::uint64_t, std::uint64_t> per_way;
  for (const auto& c : crashes) {
    const auto* way = ways.find(c.way_id);
    if (!way || !is_residential(*way)) {
      ++table.dropped_records;
      continue;
    }
    ++per_way[c.way_id];
  }
  std::uint64_t residential = 0;
  for (const auto* way : ways.sorted()) {
    if (is_residential(*way))
      ++residential;
  }
  for (const auto& [id, count] : per_way)
    ++table.rows[count];
  table.no_info = residential - per_way.size();
  return table;
}

std::vector<CrashRecord> read_crash_csv(std::istream& in)
{
  std::vector<CrashRecord> out;
  std::string line;
  std::vector<std::string> f;
  std::uint64_t line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    text::chomp(line);
    if (text::trim(line).empty())
      continue;
    if (!text::split_csv(line, f))
      throw DataError("crash line " + std::to_string(line_no) + ": MalformedRow: unterminated quote");
    if (!header) {
      if (f.size() != 2 || text::trim(f[0]) != "way_id" || text::trim(f[1]) != "crash_date")
        throw DataError("crash line " + std::to_string(line_no) + ": MalformedRow: expected header 'way_id,crash_date'");
      header = true;
      continue;
    }
    const auto id = f.size() == 2 ? text::parse_u64(f[0]) : std::nullopt;
    if (!id)
      throw DataError("crash line " + std::to_string(line_no) + ": MalformedRow: bad way_id or field count");
    out.push_back({*id, std::string(text::trim(f[1]))});
  }
  if (in.bad())
    throw IoError("crash stream unreadable");
  return out;
}

}  // namespace speedwatch
