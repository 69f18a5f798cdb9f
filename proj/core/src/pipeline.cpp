#include "speedwatch/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <unordered_map>

#include "speedwatch/text.hpp"

namespace speedwatch {

namespace {

using nlohmann::json;

template <typename T>
void read_field(const json& j, const char* key, T& out)
{
  const auto it = j.find(key);
  if (it == j.end() || it->is_null())
    return;
  try {
    out = it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config: '") + key + "' has the wrong type");
  }
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p)
{
  if (p.empty())
    return {};
  std::filesystem::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

json table_json(const AnonymizedTable& t)
{
  json rows = json::array();
  for (const auto& r : t.rows) {
    rows.push_back({{"alias", r.alias},
                    {"total_rows", r.total_rows},
                    {"percent", r.percent},
                    {"avg_speed_kmh", r.avg_speed},
                    {"speed_sd_kmh", r.speed_sd ? json(*r.speed_sd) : json(nullptr)},
                    {"speed_limit_kmh", r.limit_kmh}});
  }
  return rows;
}

}  // namespace

void PipelineConfig::validate() const
{
  if (postal_codes.empty())
    throw ConfigError("config: postal_codes must not be empty");
  if (min_observations < 1)
    throw ConfigError("config: min_observations must be >= 1");
  if (top_n < 1)
    throw ConfigError("config: top_n must be >= 1");
  if (window_start && window_end && *window_end <= *window_start)
    throw ConfigError("config: time window end must be after its start");
  if (speed_flag_kmh && !(*speed_flag_kmh > 0.0))
    throw ConfigError("config: speed_flag_kmh must be positive");
  policy.validate();
  time_bins.validate();
}

PipelineConfig PipelineConfig::from_json(const json& j, const std::filesystem::path& base_dir)
{
  if (!j.is_object())
    throw ConfigError("config must be a JSON object");
  static const std::set<std::string, std::less<>> known = {
    "trajectories", "way_table", "summary_out", "report_out", "postal_codes", "residential_only", "policy",
    "time_bins", "min_observations", "top_n", "error_policy", "time_window", "speed_flag_kmh"};
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key))
      throw ConfigError("config: unknown key '" + key + "'");
  }

  PipelineConfig c;
  std::string path;
  path.clear(); read_field(j, "trajectories", path); c.trajectories = resolve(base_dir, path);
  path.clear(); read_field(j, "way_table", path); c.way_table = resolve(base_dir, path);
  path.clear(); read_field(j, "summary_out", path); c.summary_out = resolve(base_dir, path);
  path.clear(); read_field(j, "report_out", path); c.report_out = resolve(base_dir, path);

  std::vector<std::string> postal;
  read_field(j, "postal_codes", postal);
  c.postal_codes.insert(postal.begin(), postal.end());
  read_field(j, "residential_only", c.residential_only);
  if (j.contains("policy"))
    read_json(j.at("policy"), c.policy);
  if (j.contains("time_bins"))
    read_json(j.at("time_bins"), c.time_bins);
  std::int64_t min_obs = static_cast<std::int64_t>(c.min_observations);
  read_field(j, "min_observations", min_obs);
  if (min_obs < 1)
    throw ConfigError("config: min_observations must be >= 1");
  c.min_observations = static_cast<std::uint64_t>(min_obs);
  std::int64_t top = static_cast<std::int64_t>(c.top_n);
  read_field(j, "top_n", top);
  if (top < 1)
    throw ConfigError("config: top_n must be >= 1");
  c.top_n = static_cast<std::size_t>(top);

  std::string policy = "skip";
  read_field(j, "error_policy", policy);
  if (policy == "skip")
    c.error_policy = ErrorPolicy::Skip;
  else if (policy == "strict")
    c.error_policy = ErrorPolicy::Strict;
  else
    throw ConfigError("config: error_policy must be skip|strict");

  if (const auto it = j.find("time_window"); it != j.end() && !it->is_null()) {
    if (!it->is_object())
      throw ConfigError("config: time_window must be an object");
    for (const auto& [key, value] : it->items()) {
      if (key != "start" && key != "end")
        throw ConfigError("config: time_window: unknown key '" + key + "'");
    }
    std::int64_t v = 0;
    if (it->contains("start")) {
      read_field(*it, "start", v);
      c.window_start = v;
    }
    if (it->contains("end")) {
      read_field(*it, "end", v);
      c.window_end = v;
    }
  }
  if (const auto it = j.find("speed_flag_kmh"); it != j.end() && !it->is_null()) {
    double v = 0.0;
    read_field(j, "speed_flag_kmh", v);
    c.speed_flag_kmh = v;
  }
  if (c.trajectories.empty() || c.way_table.empty() || c.summary_out.empty() || c.report_out.empty())
    throw ConfigError("config: trajectories, way_table, summary_out and report_out are required");
  c.validate();
  return c;
}

json PipelineConfig::to_json() const
{
  json j = {{"trajectories", trajectories.string()},
            {"way_table", way_table.string()},
            {"summary_out", summary_out.string()},
            {"report_out", report_out.string()},
            {"postal_codes", std::vector<std::string>(postal_codes.begin(), postal_codes.end())},
            {"residential_only", residential_only},
            {"policy", speedwatch::to_json(policy)},
            {"time_bins", speedwatch::to_json(time_bins)},
            {"min_observations", min_observations},
            {"top_n", top_n},
            {"error_policy", error_policy == ErrorPolicy::Skip ? "skip" : "strict"}};
  if (window_start || window_end) {
    json w = json::object();
    if (window_start)
      w["start"] = *window_start;
    if (window_end)
      w["end"] = *window_end;
    j["time_window"] = std::move(w);
  }
  if (speed_flag_kmh)
    j["speed_flag_kmh"] = *speed_flag_kmh;
  return j;
}

OracleConfig PipelineConfig::oracle_config() const
{
  return {postal_codes, residential_only, policy, time_bins, window_start, window_end};
}

double RunReport::imputed_limit_share() const
{
  return summary_count == 0 ? 0.0 : static_cast<double>(imputed_limit_ways) / static_cast<double>(summary_count);
}

double RunReport::analyzed_imputed_limit_share() const
{
  return analyzed_ways == 0 ? 0.0 : static_cast<double>(analyzed_imputed_ways) / static_cast<double>(analyzed_ways);
}

json RunReport::to_json(const PipelineConfig& config) const
{
  json reasons = json::object();
  for (const auto& [reason, count] : ingest.rejection_reasons)
    reasons[reason] = count;

  const json stage_list = json::array({
    {{"stage", "ingested"}, {"rows", stages.ingested}, {"dropped", 0}},
    {{"stage", "time_window"}, {"rows", stages.after_time_window}, {"dropped", stages.ingested - stages.after_time_window}},
    {{"stage", "postal"}, {"rows", stages.after_postal}, {"dropped", stages.after_time_window - stages.after_postal}},
    {{"stage", "way_match"}, {"rows", stages.after_way_match}, {"dropped", stages.after_postal - stages.after_way_match}},
    {{"stage", "residential"},
     {"rows", stages.after_residential},
     {"dropped", stages.after_way_match - stages.after_residential}},
  });

  return {{"config", config.to_json()},
          {"ingest",
           {{"rows_read", ingest.rows_read},
            {"rows_accepted", ingest.rows_accepted},
            {"rows_rejected", ingest.rows_rejected},
            {"rejection_reasons", std::move(reasons)}}},
          {"stages", stage_list},
          {"classified_points", stages.after_residential},
          {"imputed_limit_points", imputed_limit_points},
          {"flagged_points", flagged_points},
          {"summary_count", summary_count},
          {"imputed_limit_ways", imputed_limit_ways},
          {"imputed_limit_share", imputed_limit_share()},
          {"analyzed_ways", analyzed_ways},
          {"analyzed_imputed_limit_share", analyzed_imputed_limit_share()},
          {"analytics", analytics}};
}

PipelineResult run_pipeline(const PipelineConfig& config, std::istream& trajectories, const WayTable& ways)
{
  config.validate();

  RunReport report;
  WayAggregator aggregator;
  TrajectoryReader reader(trajectories, config.error_policy);

  // Thresholds depend only on the limit; cache them per way.
  struct WayPlan
  {
    bool analyzed;
    EffectiveLimit limit;
    SpeedThresholds thresholds;
  };
  std::unordered_map<std::uint64_t, WayPlan> plans;
  plans.reserve(ways.size());

  ClassifiedPoint cp;
  while (reader.next(cp.point)) {
    auto& st = report.stages;
    const auto& p = cp.point;
    ++st.ingested;
    if ((config.window_start && p.timestamp < *config.window_start) ||
        (config.window_end && p.timestamp >= *config.window_end))
      continue;
    ++st.after_time_window;
    if (!filter_postal(p, config.postal_codes))
      continue;
    ++st.after_postal;

    auto plan = plans.find(p.way_id);
    if (plan == plans.end()) {
      const WayRecord* way = ways.find(p.way_id);
      if (!way)
        continue;  // unknown ways are not cached: the table is fixed, so they stay unknown
      const bool analyzed = !config.residential_only || is_residential(*way);
      const auto limit = effective_speed_limit(way, config.policy);
      plan = plans.emplace(p.way_id, WayPlan{analyzed, limit, speed_thresholds(limit.kmh, config.policy)}).first;
    }
    ++st.after_way_match;
    if (!plan->second.analyzed)
      continue;
    ++st.after_residential;

    cp.limit_kmh = plan->second.limit.kmh;
    cp.limit_imputed = plan->second.limit.imputed;
    cp.flags = classify_speed(p.speed_kmh, plan->second.thresholds);
    cp.bin = time_bin(p.timestamp, config.time_bins);
    if (cp.limit_imputed)
      ++report.imputed_limit_points;
    if (config.speed_flag_kmh && p.speed_kmh >= *config.speed_flag_kmh)
      ++report.flagged_points;
    aggregator.add(cp);
  }
  report.ingest = reader.stats();

  PipelineResult result;
  result.summaries = aggregator.finalize();
  report.summary_count = result.summaries.size();
  for (const auto& [id, acc] : aggregator.accumulators()) {
    const bool analyzed = acc.n() >= config.min_observations;
    report.imputed_limit_ways += acc.limit_imputed();
    report.analyzed_ways += analyzed;
    report.analyzed_imputed_ways += analyzed && acc.limit_imputed();
  }
  report.analytics = analytics_report(result.summaries, config.min_observations, config.top_n,
                                      {Metric::Aggressive, Metric::Reckless});
  result.report = std::move(report);
  return result;
}

json analytics_report(std::span<const WaySummary> summaries, std::uint64_t min_observations, std::size_t top_n,
                      const std::vector<Metric>& metrics)
{
  const auto kept = filter_min_observations(summaries, min_observations);
  json out = {{"min_observations", min_observations}, {"segments_analyzed", kept.size()}};
  if (kept.empty()) {
    out["warning"] = "EmptyAfterFilter: no way has at least min_observations rows";
    return out;
  }

  AliasMap aliases;
  json per_metric = json::object();
  for (const auto metric : metrics) {
    const auto table = speedwatch::top_n(kept, metric, top_n, aliases);
    per_metric[std::string(to_string(metric))] = {
      {"fraction_any", fraction_exceeding(kept, metric, 0.0)},
      {"fraction_at_least_10", fraction_exceeding(kept, metric, 10.0)},
      {"fraction_at_least_20", fraction_exceeding(kept, metric, 20.0)},
      {"cdf_breakpoints", compute_cdf(kept, metric).points.size()},
      {"top_n", table_json(table)}};
  }
  out["metrics"] = std::move(per_metric);

  const auto dn = day_night_comparison(kept);
  out["day_night"] = {{"higher_day", dn.higher_day}, {"higher_night", dn.higher_night}, {"excluded", dn.excluded}};

  json alias_map = json::array();
  for (const auto& [id, alias] : aliases.entries())
    alias_map.push_back({{"alias", alias}, {"way_id", id}});
  out["alias_map"] = std::move(alias_map);
  return out;
}

}  // namespace speedwatch
