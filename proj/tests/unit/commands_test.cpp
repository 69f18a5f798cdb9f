#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <fstream>
#include <regex>
#include <sstream>

#include "speedwatch/aggregate.hpp"
#include "speedwatch/commands.hpp"
#include "speedwatch/oracle.hpp"
#include "speedwatch/osm_ways.hpp"
#include "speedwatch/report.hpp"
#include "speedwatch/synth.hpp"
#include "speedwatch/xml_reader.hpp"
#include "test_support.hpp"

using namespace speedwatch;
using testutil::read_file;
using testutil::TempDir;
using testutil::write_file;

namespace {

const std::filesystem::path kData = SPEEDWATCH_TEST_DATA_DIR;

int cli(const std::string& args)
{
  const std::string cmd = std::string("\"") + SPEEDWATCH_CLI_PATH + "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

/// Writes a synthetic dataset and an analyze config pointing at it.
std::filesystem::path prepare_analyze(const TempDir& dir, const SynthScenario& sc, std::uint64_t seed)
{
  write_dataset(generate(sc, seed), dir.path());
  nlohmann::json cfg = {{"trajectories", "trajectories.csv"},
                        {"way_table", "ways.csv"},
                        {"summary_out", "out/summary.csv"},
                        {"report_out", "out/run_report.json"},
                        {"postal_codes", sc.postal_codes}};
  write_file(dir / "config.json", cfg.dump(2));
  return dir / "config.json";
}

}  // namespace

TEST(EnrichCommandTest, FixtureGivesWayTable)
{
  TempDir dir;
  std::ostringstream log;
  ASSERT_EQ(cmd_enrich(kData / "three_ways.osm", dir / "ways.csv", log), kExitOk);
  std::ifstream in(dir / "ways.csv");
  const auto t = load_way_table(in);
  EXPECT_EQ(t.size(), 3u);
  EXPECT_EQ(t.find(42)->maxspeed_kmh, 40.2336);
  EXPECT_EQ(t.find(45)->maxspeed_raw, "none");
  EXPECT_FALSE(t.find(45)->maxspeed_kmh);
}

TEST(EnrichCommandTest, NoHighwaysWarns)
{
  TempDir dir;
  std::ostringstream log;
  ASSERT_EQ(cmd_enrich(kData / "no_highways.osm", dir / "ways.csv", log), kExitOk);
  EXPECT_NE(log.str().find("warning"), std::string::npos);
  EXPECT_EQ(read_file(dir / "ways.csv"), std::string(kWayTableHeader) + "\n");
}

TEST(EnrichCommandTest, ErrorExitCodes)
{
  TempDir dir;
  std::ostringstream log;
  EXPECT_EQ(cmd_enrich(dir / "missing.osm", dir / "ways.csv", log), kExitUsage);
  EXPECT_EQ(cmd_enrich(kData / "malformed.osm", dir / "ways.csv", log), kExitData);
  EXPECT_FALSE(std::filesystem::exists(dir / "ways.csv"));
}

TEST(AnalyzeCommandTest, SummaryEqualsOracleCsv)
{
  TempDir dir;
  const auto sc = random_scenario(31);
  const auto cfg = prepare_analyze(dir, sc, 31);
  std::ostringstream log;
  ASSERT_EQ(cmd_analyze(cfg, {}, log), kExitOk) << log.str();

  std::ifstream traj(dir / "trajectories.csv"), ways_in(dir / "ways.csv");
  OracleConfig oc;
  oc.postal_codes.insert(sc.postal_codes.begin(), sc.postal_codes.end());
  const auto expected = oracle_summarize(traj, load_way_table(ways_in), oc);
  std::ifstream summary(dir / "out/summary.csv");
  const auto got = read_summary_csv(summary);
  ASSERT_EQ(got.size(), expected.size());
  for (std::size_t i = 0; i < got.size(); ++i) {
    EXPECT_EQ(got[i].osm_way_id, expected[i].osm_way_id);
    EXPECT_EQ(got[i].aggressive_speeding_row_number, expected[i].aggressive_speeding_row_number);
    EXPECT_EQ(got[i].reckless_speeding_row_number, expected[i].reckless_speeding_row_number);
    EXPECT_NEAR(got[i].way_id_avg_speed, expected[i].way_id_avg_speed, 1e-9);
  }
  const auto report = nlohmann::json::parse(read_file(dir / "out/run_report.json"));
  EXPECT_TRUE(report.contains("stages"));
}

TEST(AnalyzeCommandTest, EmptyPostalSetIsConfigError)
{
  TempDir dir;
  write_file(dir / "config.json", R"({"trajectories": "t.csv", "way_table": "w.csv", "summary_out": "s.csv",
    "report_out": "r.json", "postal_codes": []})");
  std::ostringstream log;
  EXPECT_EQ(cmd_analyze(dir / "config.json", {}, log), kExitUsage);
  EXPECT_EQ(cmd_analyze(dir / "nope.json", {}, log), kExitUsage);
}

TEST(AnalyzeCommandTest, AllNonResidentialReportsStages)
{
  TempDir dir;
  SynthScenario sc;
  SynthWay w;
  w.way_id = 5;
  w.highway_class = "primary";
  w.points = 300;
  sc.ways.push_back(w);
  const auto cfg = prepare_analyze(dir, sc, 1);
  std::ostringstream log;
  ASSERT_EQ(cmd_analyze(cfg, {}, log), kExitOk) << log.str();
  EXPECT_EQ(read_file(dir / "out/summary.csv"), std::string(kSummaryHeader) + "\n");
  const auto report = nlohmann::json::parse(read_file(dir / "out/run_report.json"));
  const auto dump = report.dump();
  EXPECT_NE(dump.find("residential"), std::string::npos);
}

TEST(AnalyzeCommandTest, StrictModeBadRowIsDataError)
{
  TempDir dir;
  const auto cfg = prepare_analyze(dir, random_scenario(2, {.ways = 5, .points = 200}), 2);
  std::ofstream(dir / "trajectories.csv", std::ios::app) << "1649160000,38,-78,-4,1,22901\n";
  std::ostringstream log;
  EXPECT_EQ(cmd_analyze(cfg, {}, log), kExitOk);
  AnalyzeOverrides strict;
  strict.strict = true;
  EXPECT_EQ(cmd_analyze(cfg, strict, log), kExitData);
}

TEST(ReportCommandTest, FixtureOutputs)
{
  TempDir dir;
  std::ostringstream log;
  ReportOptions opt;
  opt.summary_csv = kData / "report_summary.csv";
  opt.out_dir = dir.path();
  ASSERT_EQ(cmd_report(opt, log), kExitOk) << log.str();

  EXPECT_EQ(read_file(dir / "cdf_aggressive.csv"), "value_percent,cum_fraction\n0,0.5\n5,0.75\n20,1\n");
  const auto top = read_file(dir / "top_aggressive.csv");
  EXPECT_EQ(top.substr(0, top.find('\n')), kTopNHeader);
  EXPECT_NE(top.find("a,100,20.00,52.00,14.30,40.23"), std::string::npos);
  EXPECT_EQ(top.find("104"), std::string::npos);

  const auto svg = read_file(dir / "cdf_aggressive.svg");
  EXPECT_TRUE(is_well_formed_xml(svg));
  EXPECT_TRUE(std::filesystem::exists(dir / "day_night.json"));
  EXPECT_TRUE(std::filesystem::exists(dir / "alias_map.csv"));
}

TEST(ReportCommandTest, AllFilteredWarns)
{
  TempDir dir;
  std::ostringstream log;
  ReportOptions opt;
  opt.summary_csv = kData / "report_summary.csv";
  opt.out_dir = dir.path();
  opt.min_observations = 1000;
  ASSERT_EQ(cmd_report(opt, log), kExitOk);
  EXPECT_NE(log.str().find("EmptyAfterFilter"), std::string::npos);
  EXPECT_FALSE(std::filesystem::exists(dir / "cdf_aggressive.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "report.json"));
}

TEST(SynthCommandTest, ThreeFilesAndRerunIdentical)
{
  TempDir a, b, c;
  std::ostringstream log;
  ASSERT_EQ(cmd_synth(kData / "scenario.json", a.path(), std::nullopt, log), kExitOk) << log.str();
  ASSERT_EQ(cmd_synth(kData / "scenario.json", b.path(), std::nullopt, log), kExitOk);
  ASSERT_EQ(cmd_synth(kData / "scenario.json", c.path(), 99, log), kExitOk);
  for (const char* f : {"trajectories.csv", "ways.csv", "ground_truth.json"}) {
    ASSERT_TRUE(std::filesystem::exists(a / f)) << f;
    EXPECT_EQ(read_file(a / f), read_file(b / f)) << f;
  }
  EXPECT_NE(read_file(a / "trajectories.csv"), read_file(c / "trajectories.csv"));
  EXPECT_EQ(read_file(a / "ways.csv"), read_file(c / "ways.csv"));
}

TEST(SynthCommandTest, MalformedJsonIsUsageError)
{
  TempDir dir;
  write_file(dir / "bad.json", "{\"ways\": [");
  std::ostringstream log;
  EXPECT_EQ(cmd_synth(dir / "bad.json", dir / "out", std::nullopt, log), kExitUsage);
}

TEST(CrashCommandTest, FixtureHistogram)
{
  TempDir dir;
  std::ostringstream log;
  ASSERT_EQ(cmd_crash(kData / "crashes.csv", kData / "crash_ways.csv", dir / "freq.csv", log), kExitOk);
  EXPECT_EQ(read_file(dir / "freq.csv"), "crash_count,way_count\n1,1\n2,1\nno_info,2\n");
  EXPECT_NE(log.str().find("1 records on unknown"), std::string::npos) << log.str();

  ASSERT_EQ(cmd_crash(kData / "crashes_empty.csv", kData / "crash_ways.csv", dir / "empty.csv", log), kExitOk);
  EXPECT_EQ(read_file(dir / "empty.csv"), "crash_count,way_count\nno_info,4\n");
}

TEST(CdfSvgTest, SinglePolylineStepPlot)
{
  CdfSeries s{"aggressive", {{0, 0.5}, {5, 0.75}, {20, 1.0}}};
  const auto svg = render_cdf_svg(s);
  EXPECT_TRUE(is_well_formed_xml(svg));
  const std::regex poly("<polyline[^>]*points=\"([^\"]*)\"");
  std::smatch m;
  ASSERT_TRUE(std::regex_search(svg, m, poly));
  EXPECT_EQ(svg.find("<polyline", m.position(0) + 1), std::string::npos);
  std::istringstream pts(m[1].str());
  std::string tok;
  std::size_t vertices = 0;
  while (pts >> tok)
    ++vertices;
  EXPECT_GE(vertices, 2u * s.points.size());
}

TEST(CliTest, ExitCodes)
{
  TempDir dir;
  EXPECT_EQ(cli("--help"), 0);
  EXPECT_EQ(cli(""), kExitUsage);
  EXPECT_EQ(cli("frobnicate"), kExitUsage);
  EXPECT_EQ(cli("enrich " + (dir / "missing.osm").string() + " " + (dir / "w.csv").string()), kExitUsage);
  EXPECT_EQ(cli("enrich " + (kData / "malformed.osm").string() + " " + (dir / "w.csv").string()), kExitData);
  EXPECT_EQ(cli("enrich " + (kData / "three_ways.osm").string() + " " + (dir / "w.csv").string()), kExitOk);
  EXPECT_EQ(cli("report " + (kData / "report_summary.csv").string() + " " + dir.path().string() +
                " --metric sideways"),
            kExitUsage);
  EXPECT_EQ(cli("analyze --config " + (dir / "nope.json").string() + " --rounding rounded"), kExitUsage);
}
