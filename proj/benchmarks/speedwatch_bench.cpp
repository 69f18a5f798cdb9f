#include <benchmark/benchmark.h>

#include <sstream>
#include <string>
#include <vector>

#include "speedwatch/aggregate.hpp"
#include "speedwatch/osm_ways.hpp"
#include "speedwatch/pipeline.hpp"
#include "speedwatch/policy.hpp"
#include "speedwatch/synth.hpp"
#include "speedwatch/trajectory.hpp"

using namespace speedwatch;

namespace {

const SynthDataset& dataset()
{
  static const SynthDataset ds = [] {
    RandomScenarioOptions opt;
    opt.ways = 500;
    opt.points = 200'000;
    return generate(random_scenario(3, opt), 3);
  }();
  return ds;
}

const std::string& dataset_csv()
{
  static const std::string csv = [] {
    std::ostringstream out;
    write_trajectories(out, dataset().trajectories);
    return out.str();
  }();
  return csv;
}

}  // namespace

static void BM_ParseRow(benchmark::State& state)
{
  const std::string row = "1649160000,38.0312,-78.4821,56.327,123456789,22901";
  const TrajectorySchema schema;
  for (auto _ : state)
    benchmark::DoNotOptimize(parse_trajectory_row(row, schema));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_ParseRow);

static void BM_ParseMaxspeed(benchmark::State& state)
{
  const std::string_view values[] = {"25 mph", "40", "50 km/h", "none"};
  std::size_t i = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(parse_maxspeed(values[i++ & 3]));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_ParseMaxspeed);

static void BM_ClassifyAndBin(benchmark::State& state)
{
  const auto& pts = dataset().trajectories;
  const auto thresholds = speed_thresholds(40.2336, SpeedPolicy{});
  const TimeBinConfig bins;
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& p = pts[i++ % pts.size()];
    benchmark::DoNotOptimize(classify_speed(p.speed_kmh, thresholds));
    benchmark::DoNotOptimize(time_bin(p.timestamp, bins));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_ClassifyAndBin);

static void BM_Accumulate(benchmark::State& state)
{
  ClassifiedPoint cp;
  cp.point.way_id = 1;
  cp.limit_kmh = 40.2336;
  cp.bin = TimeBin::Night;
  WayAccumulator acc(1, 40.2336, true);
  double speed = 0.0;
  for (auto _ : state) {
    cp.point.speed_kmh = speed;
    speed = speed > 120.0 ? 0.0 : speed + 0.7;
    acc.add(cp);
  }
  benchmark::DoNotOptimize(acc.mean());
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Accumulate);

static void BM_Pipeline(benchmark::State& state)
{
  const auto& csv = dataset_csv();
  PipelineConfig config;
  config.postal_codes = {"22901", "22902", "22903", "22911"};
  for (auto _ : state) {
    std::istringstream in(csv);
    benchmark::DoNotOptimize(run_pipeline(config, in, dataset().ways));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(dataset().trajectories.size()));
}
BENCHMARK(BM_Pipeline)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
