#include "speedwatch/commands.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "speedwatch/aggregate.hpp"
#include "speedwatch/osm_ways.hpp"
#include "speedwatch/pipeline.hpp"
#include "speedwatch/report.hpp"
#include "speedwatch/synth.hpp"
#include "speedwatch/xml_reader.hpp"

namespace speedwatch {

namespace {

using nlohmann::json;

std::ifstream open_input(const std::filesystem::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in || std::filesystem::is_directory(path))
    throw IoError("cannot read " + path.string());
  return in;
}

json read_json_file(const std::filesystem::path& path)
{
  auto in = open_input(path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void ensure_parent(const std::filesystem::path& path)
{
  const auto parent = path.parent_path();
  if (parent.empty())
    return;
  std::error_code ec;
  std::filesystem::create_directories(parent, ec);
  if (ec)
    throw IoError("cannot create " + parent.string() + ": " + ec.message());
}

// Maps the error hierarchy onto exit codes.
template <typename Fn>
int run_command(const char* name, std::ostream& log, Fn&& fn)
{
  try {
    return fn();
  } catch (const ConfigError& e) {
    log << name << ": error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    log << name << ": error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DataError& e) {
    log << name << ": data error: " << e.what() << '\n';
    return kExitData;
  } catch (const Error& e) {
    log << name << ": data error: " << e.what() << '\n';
    return kExitData;
  }
}

}  // namespace

int cmd_enrich(const std::filesystem::path& osm_xml, const std::filesystem::path& out_way_table, std::ostream& log)
{
  return run_command("enrich", log, [&] {
    auto in = open_input(osm_xml);
    const auto parsed = parse_osm_xml(in);
    std::ostringstream table;
    emit_way_table(parsed.table, table);
    ensure_parent(out_way_table);
    write_file_atomic(out_way_table, table.str());

    std::size_t with_limit = 0;
    for (const auto* rec : parsed.table.sorted())
      with_limit += rec->maxspeed_kmh.has_value();
    log << "enrich: ways written: " << parsed.table.size() << " (usable maxspeed: " << with_limit
        << "); skipped without a highway tag: " << parsed.ways_without_highway << "\n";
    if (parsed.table.empty())
      log << "enrich: warning: no way carries a highway tag\n";
    if (parsed.duplicate_way_ids > 0)
      log << "enrich: warning: " << parsed.duplicate_way_ids << " duplicate way elements (last occurrence kept)\n";
    return kExitOk;
  });
}

int cmd_analyze(const std::filesystem::path& config_path, const AnalyzeOverrides& overrides, std::ostream& log)
{
  return run_command("analyze", log, [&] {
    auto j = read_json_file(config_path);
    if (j.is_object()) {
      if (overrides.strict)
        j["error_policy"] = "strict";
      if (overrides.min_observations)
        j["min_observations"] = *overrides.min_observations;
      if (overrides.top_n)
        j["top_n"] = *overrides.top_n;
      if (overrides.rounding) {
        if (!j.contains("policy") || j["policy"].is_null())
          j["policy"] = json::object();
        if (j["policy"].is_object())
          j["policy"]["limit_rounding"] = std::string(to_string(*overrides.rounding));
      }
    }
    const auto config = PipelineConfig::from_json(j, config_path.parent_path());

    auto ways_in = open_input(config.way_table);
    auto traj_in = open_input(config.trajectories);
    const auto ways = load_way_table(ways_in);
    const auto result = run_pipeline(config, traj_in, ways);

    std::ostringstream summary;
    write_summary_csv(result.summaries, summary);
    const auto report = result.report.to_json(config).dump(2) + "\n";
    ensure_parent(config.summary_out);
    ensure_parent(config.report_out);
    write_file_atomic(config.summary_out, summary.str());
    write_file_atomic(config.report_out, report);

    const auto& r = result.report;
    log << "analyze: " << r.ingest.rows_read << " rows read, " << r.ingest.rows_rejected << " rejected; "
        << r.stages.after_residential << " points classified on " << r.summary_count << " ways ("
        << r.analyzed_ways << " with >= " << config.min_observations << " rows)\n";
    return kExitOk;
  });
}

int cmd_report(const ReportOptions& options, std::ostream& log)
{
  return run_command("report", log, [&] {
    std::uint64_t min_obs = 100;
    std::size_t top = 10;
    if (options.config) {
      const auto j = read_json_file(*options.config);
      try {
        min_obs = j.value("min_observations", min_obs);
        top = j.value("top_n", top);
      } catch (const json::exception&) {
        throw ConfigError("config: min_observations/top_n have the wrong type");
      }
    }
    min_obs = options.min_observations.value_or(min_obs);
    top = options.top_n.value_or(top);
    if (min_obs < 1 || top < 1)
      throw ConfigError("min_observations and top_n must be >= 1");
    if (options.metrics.empty())
      throw ConfigError("at least one metric is required");

    auto in = open_input(options.summary_csv);
    const auto summaries = read_summary_csv(in);
    const auto kept = filter_min_observations(summaries, min_obs);

    std::error_code ec;
    std::filesystem::create_directories(options.out_dir, ec);
    if (ec)
      throw IoError("cannot create " + options.out_dir.string() + ": " + ec.message());
    const auto& dir = options.out_dir;

    const auto dn = day_night_comparison(kept);
    write_file_atomic(dir / "day_night.json", day_night_json(dn).dump(2) + "\n");

    json consolidated = analytics_report(summaries, min_obs, top, options.metrics);
    consolidated["summary_rows"] = summaries.size();
    consolidated["day_night"] = day_night_json(dn);

    if (kept.empty()) {
      log << "report: warning: EmptyAfterFilter: no way has >= " << min_obs << " rows; only partial outputs written\n";
      write_file_atomic(dir / "report.json", consolidated.dump(2) + "\n");
      return kExitOk;
    }

    AliasMap aliases;
    for (const auto metric : options.metrics) {
      const std::string name(to_string(metric));
      const auto cdf = compute_cdf(kept, metric);
      std::ostringstream cdf_csv;
      write_cdf_csv(cdf, cdf_csv);
      write_file_atomic(dir / ("cdf_" + name + ".csv"), cdf_csv.str());
      emit_cdf_svg(cdf, dir / ("cdf_" + name + ".svg"));

      std::ostringstream top_csv;
      write_top_n_csv(top_n(kept, metric, top, aliases), top_csv);
      write_file_atomic(dir / ("top_" + name + ".csv"), top_csv.str());
    }
    std::ostringstream alias_csv;
    alias_csv << "alias,way_id\n";
    for (const auto& [id, alias] : aliases.entries())
      alias_csv << alias << ',' << id << '\n';
    write_file_atomic(dir / "alias_map.csv", alias_csv.str());
    write_file_atomic(dir / "report.json", consolidated.dump(2) + "\n");

    log << "report: " << kept.size() << " of " << summaries.size() << " ways analyzed; day/night: "
        << dn.higher_day << " higher by day, " << dn.higher_night << " higher by night, " << dn.excluded
        << " excluded\n";
    return kExitOk;
  });
}

int cmd_synth(const std::filesystem::path& scenario_path, const std::filesystem::path& out_dir,
              std::optional<std::uint64_t> seed, std::ostream& log)
{
  return run_command("synth", log, [&] {
    const auto scenario = scenario_from_json(read_json_file(scenario_path));
    const auto dataset = generate(scenario, seed.value_or(scenario.seed));
    write_dataset(dataset, out_dir);
    log << "synth: " << dataset.trajectories.size() << " trajectory rows over " << dataset.ways.size()
        << " ways written to " << out_dir.string() << '\n';
    return kExitOk;
  });
}

int cmd_crash(const std::filesystem::path& crash_csv, const std::filesystem::path& way_table,
              const std::filesystem::path& out_path, std::ostream& log)
{
  return run_command("crash", log, [&] {
    auto crash_in = open_input(crash_csv);
    auto ways_in = open_input(way_table);
    const auto crashes = read_crash_csv(crash_in);
    const auto ways = load_way_table(ways_in);
    const auto table = crash_frequency(crashes, ways);

    std::ostringstream out;
    write_crash_frequency_csv(table, out);
    ensure_parent(out_path);
    write_file_atomic(out_path, out.str());

    std::uint64_t with_crashes = 0;
    for (const auto& [count, n] : table.rows)
      with_crashes += n;
    log << "crash: " << crashes.size() << " records, " << with_crashes << " residential ways with crashes, "
        << table.no_info << " without; " << table.dropped_records << " records on unknown or non-residential ways dropped\n";
    return kExitOk;
  });
}

}  // namespace speedwatch
