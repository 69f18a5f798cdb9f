// speedwatch: residential speeding analytics over connected-vehicle trajectories.

#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "speedwatch/commands.hpp"

namespace sw = speedwatch;

int main(int argc, char** argv)
{
  CLI::App app{"Residential speeding analytics over connected-vehicle trajectory points"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "speedwatch 0.1.0");

  // enrich
  std::string osm_path, way_out;
  auto* enrich = app.add_subcommand("enrich", "Build a way table from an OSM XML extract");
  enrich->add_option("osm", osm_path, "OSM XML extract")->required();
  enrich->add_option("out", way_out, "Way-table CSV to write")->required();

  // analyze
  std::string config_path;
  sw::AnalyzeOverrides overrides;
  std::uint64_t min_obs = 0;
  std::size_t top_n = 0;
  std::string rounding;
  auto* analyze = app.add_subcommand("analyze", "Filter, classify and aggregate trajectories per way");
  analyze->add_option("--config", config_path, "Pipeline config JSON")->required();
  analyze->add_flag("--strict", overrides.strict, "Abort on the first malformed trajectory row");
  analyze->add_option("--min-observations", min_obs, "Minimum rows per way for network analytics")
    ->check(CLI::PositiveNumber);
  analyze->add_option("--top-n", top_n, "Rows in each top-N table")->check(CLI::PositiveNumber);
  analyze->add_option("--rounding", rounding, "Default-limit conversion")->check(CLI::IsMember({"exact", "rounded"}));

  // report
  sw::ReportOptions report_opts;
  std::string summary_path, report_dir, report_config, metric = "both";
  std::uint64_t report_min_obs = 0;
  std::size_t report_top_n = 0;
  auto* report = app.add_subcommand("report", "CDF, top-N and day/night reports from a summary CSV");
  report->add_option("summary", summary_path, "Summary CSV produced by analyze")->required();
  report->add_option("out_dir", report_dir, "Directory for report files")->required();
  report->add_option("--config", report_config, "Config JSON supplying min_observations/top_n");
  report->add_option("--metric", metric, "Metric(s) to report")->check(CLI::IsMember({"aggressive", "reckless", "both"}));
  report->add_option("--min-observations", report_min_obs, "Minimum rows per way")->check(CLI::PositiveNumber);
  report->add_option("--top-n", report_top_n, "Rows in each top-N table")->check(CLI::PositiveNumber);

  // synth
  std::string scenario_path, synth_dir;
  std::uint64_t seed = 0;
  auto* synth = app.add_subcommand("synth", "Generate a labeled synthetic dataset");
  synth->add_option("scenario", scenario_path, "Scenario JSON")->required();
  synth->add_option("out_dir", synth_dir, "Output directory")->required();
  auto* seed_opt = synth->add_option("--seed", seed, "Override the scenario seed");

  // crash
  std::string crash_path, crash_ways, crash_out;
  auto* crash = app.add_subcommand("crash", "Crash-frequency table over residential ways");
  crash->add_option("crashes", crash_path, "Crash CSV (way_id,crash_date)")->required();
  crash->add_option("way_table", crash_ways, "Way-table CSV")->required();
  crash->add_option("out", crash_out, "Frequency CSV to write")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return sw::kExitUsage;
  }

  auto& log = std::cerr;
  if (enrich->parsed())
    return sw::cmd_enrich(osm_path, way_out, log);

  if (analyze->parsed()) {
    if (min_obs > 0)
      overrides.min_observations = min_obs;
    if (top_n > 0)
      overrides.top_n = top_n;
    if (!rounding.empty())
      overrides.rounding = sw::limit_rounding_from_string(rounding);
    return sw::cmd_analyze(config_path, overrides, log);
  }

  if (report->parsed()) {
    report_opts.summary_csv = summary_path;
    report_opts.out_dir = report_dir;
    if (!report_config.empty())
      report_opts.config = report_config;
    if (metric != "both")
      report_opts.metrics = {sw::metric_from_string(metric)};
    if (report_min_obs > 0)
      report_opts.min_observations = report_min_obs;
    if (report_top_n > 0)
      report_opts.top_n = report_top_n;
    return sw::cmd_report(report_opts, log);
  }

  if (synth->parsed()) {
    std::optional<std::uint64_t> seed_override;
    if (seed_opt->count() > 0)
      seed_override = seed;
    return sw::cmd_synth(scenario_path, synth_dir, seed_override, log);
  }

  if (crash->parsed())
    return sw::cmd_crash(crash_path, crash_ways, crash_out, log);

  return sw::kExitUsage;
}
