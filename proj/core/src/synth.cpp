#include "speedwatch/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <span>

#include <nlohmann/json.hpp>

#include "speedwatch/text.hpp"

namespace speedwatch {

namespace {

using nlohmann::json;

constexpr std::int64_t kDay = 86400;
constexpr std::int64_t kSampleInterval = 3;  // seconds between points of one trip
constexpr std::uint64_t kMaxTripPoints = 40;
constexpr double kBoundaryMargin = 1e-6;  // km/h kept clear of every threshold
constexpr double kRecklessBand = 30.0;    // km/h above the reckless threshold

// mt19937_64's output sequence is fixed by the standard; the distributions in
// <random> are not, so draws are derived from raw words here.
class Rng
{
public:
  explicit Rng(std::uint64_t seed)
    : engine_(seed)
  {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + uniform() * (hi - lo); }

  /// Uniform integer in [0, n).
  std::uint64_t index(std::uint64_t n)
  {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x = engine_();
    while (x >= limit)
      x = engine_();
    return x % n;
  }

  template <typename T>
  void shuffle(std::vector<T>& v)
  {
    for (std::size_t i = v.size(); i > 1; --i)
      std::swap(v[i - 1], v[index(i)]);
  }

private:
  std::mt19937_64 engine_;
};

enum class Label : std::uint8_t { Normal, AggressiveOnly, Reckless };

struct Slot
{
  TimeBin bin;
  Label label;
};

struct HourRange
{
  int start_hour;
  int end_hour;
};

double round_to(double v, double step) { return std::round(v / step) * step; }

// Speed strictly inside [lo + margin, hi - margin], at millimetre-per-hour resolution
// when the band allows it.
double draw_speed(Rng& rng, double lo, double hi)
{
  const double a = lo + kBoundaryMargin;
  const double b = hi - kBoundaryMargin;
  if (!(b > a))
    throw InvalidScenario("speed band too narrow to draw labeled speeds");
  const bool coarse = b - a >= 0.01;
  for (int attempt = 0; attempt < 64; ++attempt) {
    double v = rng.uniform(a, b);
    if (coarse)
      v = round_to(v, 0.001);
    if (v >= a && v <= b)
      return v;
  }
  return (a + b) / 2;
}

std::vector<HourRange> bin_ranges(const TimeBinConfig& cfg, TimeBin bin)
{
  std::vector<HourRange> ranges;
  for (int h = 0; h < 24; ++h) {
    // One representative timestamp per local hour; offset cancels out.
    const std::int64_t ts = kDay * 1000 + h * 3600 - static_cast<std::int64_t>(cfg.utc_offset_minutes) * 60;
    if (time_bin(ts, cfg) != bin)
      continue;
    if (!ranges.empty() && ranges.back().end_hour == h)
      ranges.back().end_hour = h + 1;
    else
      ranges.push_back({h, h + 1});
  }
  return ranges;
}

std::int64_t first_local_midnight(std::int64_t start_epoch, int utc_offset_minutes)
{
  const std::int64_t off = static_cast<std::int64_t>(utc_offset_minutes) * 60;
  const std::int64_t local = start_epoch + off;
  const std::int64_t midnight = (local + kDay - 1) / kDay * kDay;  // start_epoch > 0
  return midnight - off;
}

template <typename T>
void read_field(const json& j, const char* key, T& out, const std::string& where)
{
  const auto it = j.find(key);
  if (it == j.end() || it->is_null())
    return;
  try {
    out = it->get<T>();
  } catch (const json::exception&) {
    throw InvalidScenario(where + ": '" + key + "' has the wrong type");
  }
}

void require_rate(double v, const std::string& what)
{
  if (!(v >= 0.0 && v <= 1.0))
    throw InvalidScenario(what + " must be in [0, 1]");
}

}  // namespace

void SynthScenario::validate() const
{
  if (postal_codes.empty())
    throw InvalidScenario("postal_codes must not be empty");
  if (!(foreign_fraction >= 0.0 && std::isfinite(foreign_fraction)))
    throw InvalidScenario("foreign_fraction must be >= 0");
  if (foreign_fraction > 0.0 && foreign_postal_codes.empty())
    throw InvalidScenario("foreign_fraction > 0 requires foreign_postal_codes");
  for (const auto& code : foreign_postal_codes) {
    if (std::find(postal_codes.begin(), postal_codes.end(), code) != postal_codes.end())
      throw InvalidScenario("postal code '" + code + "' is both in-area and foreign");
  }
  if (start_epoch <= 0 || end_epoch <= start_epoch)
    throw InvalidScenario("date range must satisfy 0 < start_epoch < end_epoch");
  try {
    policy.validate();
    time_bins.validate();
  } catch (const ConfigError& e) {
    throw InvalidScenario(e.what());
  }
  if (first_local_midnight(start_epoch, time_bins.utc_offset_minutes) + kDay > end_epoch)
    throw InvalidScenario("date range must contain at least one full local day");

  std::set<std::uint64_t> ids;
  for (const auto& w : ways) {
    const auto where = "way " + std::to_string(w.way_id);
    if (!ids.insert(w.way_id).second)
      throw InvalidScenario(where + ": duplicate way_id");
    if (w.highway_class.empty())
      throw InvalidScenario(where + ": empty highway_class");
    for (double f : {w.day_fraction, w.night_fraction, w.other_fraction})
      require_rate(f, where + ": fractions");
    if (std::abs(w.day_fraction + w.night_fraction + w.other_fraction - 1.0) > 1e-9)
      throw InvalidScenario(where + ": day/night/other fractions must sum to 1");
    require_rate(w.aggressive_rate_day, where + ": aggressive_rate_day");
    require_rate(w.aggressive_rate_night, where + ": aggressive_rate_night");
    if (w.aggressive_rate_other)
      require_rate(*w.aggressive_rate_other, where + ": aggressive_rate_other");
    require_rate(w.reckless_share_of_aggressive, where + ": reckless_share_of_aggressive");
  }
}

SynthScenario scenario_from_json(const json& j)
{
  if (!j.is_object())
    throw InvalidScenario("scenario must be a JSON object");
  SynthScenario s;
  const std::string where = "scenario";
  read_field(j, "postal_codes", s.postal_codes, where);
  read_field(j, "foreign_postal_codes", s.foreign_postal_codes, where);
  read_field(j, "foreign_fraction", s.foreign_fraction, where);
  read_field(j, "unmatched_points", s.unmatched_points, where);
  read_field(j, "seed", s.seed, where);
  read_field(j, "start_epoch", s.start_epoch, where);
  read_field(j, "end_epoch", s.end_epoch, where);
  try {
    if (j.contains("policy"))
      read_json(j.at("policy"), s.policy);
    if (j.contains("time_bins"))
      read_json(j.at("time_bins"), s.time_bins);
  } catch (const ConfigError& e) {
    throw InvalidScenario(e.what());
  }

  const auto ways = j.find("ways");
  if (ways == j.end() || !ways->is_array())
    throw InvalidScenario("scenario: 'ways' must be an array");
  for (const auto& wj : *ways) {
    if (!wj.is_object() || !wj.contains("way_id"))
      throw InvalidScenario("scenario: each way needs a way_id");
    SynthWay w;
    read_field(wj, "way_id", w.way_id, where);
    const auto wwhere = "way " + std::to_string(w.way_id);
    read_field(wj, "highway_class", w.highway_class, wwhere);
    if (wj.contains("maxspeed_raw") && !wj.at("maxspeed_raw").is_null()) {
      std::string raw;
      read_field(wj, "maxspeed_raw", raw, wwhere);
      w.maxspeed_raw = raw;
    }
    read_field(wj, "points", w.points, wwhere);
    read_field(wj, "day_fraction", w.day_fraction, wwhere);
    read_field(wj, "night_fraction", w.night_fraction, wwhere);
    read_field(wj, "other_fraction", w.other_fraction, wwhere);
    read_field(wj, "aggressive_rate_day", w.aggressive_rate_day, wwhere);
    read_field(wj, "aggressive_rate_night", w.aggressive_rate_night, wwhere);
    if (wj.contains("aggressive_rate_other") && !wj.at("aggressive_rate_other").is_null()) {
      double r = 0.0;
      read_field(wj, "aggressive_rate_other", r, wwhere);
      w.aggressive_rate_other = r;
    }
    read_field(wj, "reckless_share_of_aggressive", w.reckless_share_of_aggressive, wwhere);
    s.ways.push_back(std::move(w));
  }
  s.validate();
  return s;
}

json to_json(const SynthScenario& s)
{
  json ways = json::array();
  for (const auto& w : s.ways) {
    json wj = {{"way_id", w.way_id},
               {"highway_class", w.highway_class},
               {"maxspeed_raw", w.maxspeed_raw ? json(*w.maxspeed_raw) : json(nullptr)},
               {"points", w.points},
               {"day_fraction", w.day_fraction},
               {"night_fraction", w.night_fraction},
               {"other_fraction", w.other_fraction},
               {"aggressive_rate_day", w.aggressive_rate_day},
               {"aggressive_rate_night", w.aggressive_rate_night},
               {"reckless_share_of_aggressive", w.reckless_share_of_aggressive}};
    if (w.aggressive_rate_other)
      wj["aggressive_rate_other"] = *w.aggressive_rate_other;
    ways.push_back(std::move(wj));
  }
  return {{"postal_codes", s.postal_codes},
          {"foreign_postal_codes", s.foreign_postal_codes},
          {"foreign_fraction", s.foreign_fraction},
          {"unmatched_points", s.unmatched_points},
          {"seed", s.seed},
          {"start_epoch", s.start_epoch},
          {"end_epoch", s.end_epoch},
          {"policy", to_json(s.policy)},
          {"time_bins", to_json(s.time_bins)},
          {"ways", std::move(ways)}};
}

json GroundTruth::to_json() const
{
  json out = json::object();
  for (const auto& [id, t] : ways) {
    out[std::to_string(id)] = {{"highway_class", t.highway_class},
                               {"n", t.n},
                               {"day_n", t.day_n},
                               {"night_n", t.night_n},
                               {"aggressive_n", t.aggressive_n},
                               {"reckless_n", t.reckless_n},
                               {"day_aggressive_n", t.day_aggressive_n},
                               {"night_aggressive_n", t.night_aggressive_n}};
  }
  return {{"ways", std::move(out)}};
}

GroundTruth GroundTruth::from_json(const json& j)
{
  GroundTruth truth;
  try {
    for (const auto& [key, t] : j.at("ways").items()) {
      const auto id = text::parse_u64(key);
      if (!id)
        throw DataError("ground truth: bad way id '" + key + "'");
      WayTruth w;
      w.highway_class = t.at("highway_class").get<std::string>();
      w.n = t.at("n").get<std::uint64_t>();
      w.day_n = t.at("day_n").get<std::uint64_t>();
      w.night_n = t.at("night_n").get<std::uint64_t>();
      w.aggressive_n = t.at("aggressive_n").get<std::uint64_t>();
      w.reckless_n = t.at("reckless_n").get<std::uint64_t>();
      w.day_aggressive_n = t.at("day_aggressive_n").get<std::uint64_t>();
      w.night_aggressive_n = t.at("night_aggressive_n").get<std::uint64_t>();
      truth.ways.emplace(*id, std::move(w));
    }
  } catch (const json::exception& e) {
    throw DataError(std::string("ground truth: ") + e.what());
  }
  return truth;
}

namespace {

/// Aggressive counts per bin. The way total is the rounded sum of the
/// expected counts, spread over bins by largest remainder, so rates like
/// 0.95 on 100 points give exactly 95 however the bins split.
std::array<std::uint64_t, 3> apportion_aggressive(const std::uint64_t (&bin_n)[3], const double (&rate)[3])
{
  std::array<double, 3> expected{};
  std::array<std::uint64_t, 3> out{};
  double sum = 0.0;
  std::uint64_t assigned = 0;
  for (int b = 0; b < 3; ++b) {
    expected[b] = rate[b] * static_cast<double>(bin_n[b]);
    sum += expected[b];
    out[b] = std::min(bin_n[b], static_cast<std::uint64_t>(std::floor(expected[b])));
    assigned += out[b];
  }
  auto total = static_cast<std::uint64_t>(std::llround(sum));
  std::array<int, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return expected[a] - std::floor(expected[a]) > expected[b] - std::floor(expected[b]);
  });
  for (int b : order) {
    if (assigned >= total)
      break;
    if (out[b] < bin_n[b]) {
      ++out[b];
      ++assigned;
    }
  }
  return out;
}

}  // namespace

SynthDataset generate(const SynthScenario& scenario, std::uint64_t seed)
{
  scenario.validate();
  Rng rng(seed);
  SynthDataset out;

  const auto& tb = scenario.time_bins;
  const std::int64_t day0 = first_local_midnight(scenario.start_epoch, tb.utc_offset_minutes);
  const auto days = static_cast<std::uint64_t>((scenario.end_epoch - day0) / kDay);
  const std::vector<HourRange> ranges[3] = {
    bin_ranges(tb, TimeBin::Day), bin_ranges(tb, TimeBin::Night), bin_ranges(tb, TimeBin::Other)};

  auto random_time = [&](TimeBin bin, std::uint64_t trip_len) -> std::int64_t {
    const auto& rs = ranges[static_cast<int>(bin)];
    std::int64_t total = 0;
    for (const auto& r : rs)
      total += r.end_hour - r.start_hour;
    if (total == 0)
      throw InvalidScenario("points requested in the " + std::string(to_string(bin)) + " bin, which covers no hours");
    auto pick = static_cast<std::int64_t>(rng.index(static_cast<std::uint64_t>(total)));
    const HourRange* chosen = &rs.front();
    for (const auto& r : rs) {
      if (pick < r.end_hour - r.start_hour) {
        chosen = &r;
        break;
      }
      pick -= r.end_hour - r.start_hour;
    }
    // Keep every point of the trip at least one second inside the window.
    const std::int64_t lo = chosen->start_hour * 3600 + 1;
    const std::int64_t hi = chosen->end_hour * 3600 - 1 - kSampleInterval * static_cast<std::int64_t>(trip_len - 1);
    const auto second = lo + static_cast<std::int64_t>(rng.index(static_cast<std::uint64_t>(hi - lo + 1)));
    return day0 + static_cast<std::int64_t>(rng.index(days)) * kDay + second;
  };

  auto pick = [&](const std::vector<std::string>& pool) -> const std::string& { return pool[rng.index(pool.size())]; };

  struct Emitted
  {
    TrajectoryPoint point;
    std::uint64_t seq;
  };
  std::vector<Emitted> rows;
  std::uint64_t seq = 0;

  struct WayGeometry
  {
    double lat, lon;
    SpeedThresholds thresholds;
    double limit;
  };
  std::vector<WayGeometry> geometry;

  auto speed_for = [&](const WayGeometry& g, Label label) {
    switch (label) {
      case Label::Normal: return draw_speed(rng, 0.0, g.thresholds.aggressive_kmh);
      case Label::AggressiveOnly: return draw_speed(rng, g.thresholds.aggressive_kmh, g.thresholds.reckless_kmh);
      case Label::Reckless:
        return draw_speed(rng, g.thresholds.reckless_kmh, g.thresholds.reckless_kmh + kRecklessBand);
    }
    return 0.0;
  };

  auto emit_trip = [&](std::uint64_t way_id, const WayGeometry& g, TimeBin bin, std::span<const Label> labels,
                       const std::string& postal) {
    const auto start = random_time(bin, labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
      TrajectoryPoint p;
      p.timestamp = start + kSampleInterval * static_cast<std::int64_t>(i);
      p.lat = round_to(g.lat + rng.uniform(-5e-4, 5e-4), 1e-6);
      p.lon = round_to(g.lon + rng.uniform(-5e-4, 5e-4), 1e-6);
      p.speed_kmh = speed_for(g, labels[i]);
      p.way_id = way_id;
      p.postal_code = postal;
      rows.push_back({std::move(p), seq++});
    }
  };

  std::uint64_t in_area_rows = 0;
  for (const auto& w : scenario.ways) {
    WayRecord rec{w.way_id, w.highway_class, w.maxspeed_raw, std::nullopt};
    if (w.maxspeed_raw)
      rec.maxspeed_kmh = parse_maxspeed(*w.maxspeed_raw);
    const auto limit = effective_speed_limit(&rec, scenario.policy);
    geometry.push_back({38.0 + rng.uniform(0.0, 0.1), -78.55 + rng.uniform(0.0, 0.1),
                        speed_thresholds(limit.kmh, scenario.policy), limit.kmh});
    out.ways.upsert(rec);

    // Exact label counts per bin.
    const auto n = w.points;
    auto day_n = static_cast<std::uint64_t>(std::llround(w.day_fraction * static_cast<double>(n)));
    auto night_n = static_cast<std::uint64_t>(std::llround(w.night_fraction * static_cast<double>(n)));
    day_n = std::min(day_n, n);
    night_n = std::min(night_n, n - day_n);
    const std::uint64_t bin_n[3] = {day_n, night_n, n - day_n - night_n};
    const double rate[3] = {w.aggressive_rate_day, w.aggressive_rate_night,
                            w.aggressive_rate_other.value_or(w.aggressive_rate_day)};

    const auto agg_n = apportion_aggressive(bin_n, rate);
    std::vector<Slot> slots;
    slots.reserve(n);
    std::vector<std::size_t> aggressive_slots;
    for (int b = 0; b < 3; ++b) {
      const auto agg = agg_n[b];
      for (std::uint64_t i = 0; i < bin_n[b]; ++i) {
        if (i < agg)
          aggressive_slots.push_back(slots.size());
        slots.push_back({static_cast<TimeBin>(b), i < agg ? Label::AggressiveOnly : Label::Normal});
      }
    }
    const auto reckless_n = std::min<std::uint64_t>(
      aggressive_slots.size(), static_cast<std::uint64_t>(std::llround(
                                 w.reckless_share_of_aggressive * static_cast<double>(aggressive_slots.size()))));
    rng.shuffle(aggressive_slots);
    for (std::uint64_t i = 0; i < reckless_n; ++i)
      slots[aggressive_slots[i]].label = Label::Reckless;

    WayTruth truth;
    truth.highway_class = w.highway_class;
    for (const auto& s : slots) {
      const bool aggressive = s.label != Label::Normal;
      ++truth.n;
      truth.aggressive_n += aggressive;
      truth.reckless_n += s.label == Label::Reckless;
      if (s.bin == TimeBin::Day) {
        ++truth.day_n;
        truth.day_aggressive_n += aggressive;
      } else if (s.bin == TimeBin::Night) {
        ++truth.night_n;
        truth.night_aggressive_n += aggressive;
      }
    }
    out.truth.ways.emplace(w.way_id, std::move(truth));

    // Trips: shuffled labels within each bin, cut into runs of 1..40 points.
    rng.shuffle(slots);
    for (int b = 0; b < 3; ++b) {
      std::vector<Label> labels;
      for (const auto& s : slots) {
        if (static_cast<int>(s.bin) == b)
          labels.push_back(s.label);
      }
      std::size_t i = 0;
      while (i < labels.size()) {
        const auto len = std::min<std::size_t>(1 + rng.index(kMaxTripPoints), labels.size() - i);
        emit_trip(w.way_id, geometry.back(), static_cast<TimeBin>(b),
                  std::span<const Label>(labels).subspan(i, len), pick(scenario.postal_codes));
        i += len;
      }
    }
    in_area_rows += n;
  }

  // Rows that the pipeline must drop: out-of-area postal codes and unknown ways.
  auto random_label = [&] {
    const double u = rng.uniform();
    return u < 0.7 ? Label::Normal : (u < 0.9 ? Label::AggressiveOnly : Label::Reckless);
  };
  auto random_bin = [&] { return static_cast<TimeBin>(rng.index(3)); };

  const auto foreign_n =
    static_cast<std::uint64_t>(std::llround(scenario.foreign_fraction * static_cast<double>(in_area_rows)));
  if (foreign_n > 0 && scenario.ways.empty())
    throw InvalidScenario("foreign rows need at least one way");
  for (std::uint64_t i = 0; i < foreign_n; ++i) {
    const auto k = rng.index(scenario.ways.size());
    const Label label = random_label();
    emit_trip(scenario.ways[k].way_id, geometry[k], random_bin(), std::span<const Label>(&label, 1),
              pick(scenario.foreign_postal_codes));
  }

  std::uint64_t next_unknown = 1;
  for (const auto& w : scenario.ways)
    next_unknown = std::max(next_unknown, w.way_id + 1);
  const WayGeometry unknown_geometry{38.05, -78.5, speed_thresholds(40.0, scenario.policy), 40.0};
  for (std::uint64_t i = 0; i < scenario.unmatched_points; ++i) {
    const Label label = random_label();
    emit_trip(next_unknown + i % 5, unknown_geometry, random_bin(), std::span<const Label>(&label, 1),
              pick(scenario.postal_codes));
  }

  std::stable_sort(rows.begin(), rows.end(), [](const Emitted& a, const Emitted& b) {
    if (a.point.timestamp != b.point.timestamp)
      return a.point.timestamp < b.point.timestamp;
    return a.seq < b.seq;
  });
  out.trajectories.reserve(rows.size());
  for (auto& r : rows)
    out.trajectories.push_back(std::move(r.point));
  return out;
}

void write_dataset(const SynthDataset& dataset, const std::filesystem::path& out_dir)
{
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec)
    throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

  auto open = [](const std::filesystem::path& p) {
    std::ofstream f(p, std::ios::binary);
    if (!f)
      throw IoError("cannot write " + p.string());
    return f;
  };
  {
    auto f = open(out_dir / "trajectories.csv");
    write_trajectories(f, dataset.trajectories);
  }
  {
    auto f = open(out_dir / "ways.csv");
    emit_way_table(dataset.ways, f);
  }
  {
    auto f = open(out_dir / "ground_truth.json");
    f << dataset.truth.to_json().dump(2) << '\n';
  }
}

SynthScenario random_scenario(std::uint64_t seed, const RandomScenarioOptions& options)
{
  Rng rng(seed ^ 0x9E3779B97F4A7C15ULL);
  SynthScenario s;
  s.seed = seed;
  s.postal_codes = {"22901", "22902", "22903", "22911"};
  s.foreign_postal_codes = {"22701", "24401"};
  s.foreign_fraction = options.foreign_fraction;
  s.unmatched_points = options.unmatched_points;

  // Skewed point allocation: a few busy ways, many sparse ones.
  std::vector<double> weight(options.ways);
  for (auto& wgt : weight) {
    const double u = rng.uniform();
    wgt = u * u * u + 0.002;
  }
  const double total_weight = std::accumulate(weight.begin(), weight.end(), 0.0);
  std::vector<std::uint64_t> points(options.ways);
  std::uint64_t assigned = 0;
  for (std::size_t i = 0; i < options.ways; ++i) {
    points[i] = static_cast<std::uint64_t>(std::floor(weight[i] / total_weight * static_cast<double>(options.points)));
    assigned += points[i];
  }
  for (std::uint64_t i = 0; assigned < options.points; ++i, ++assigned)
    ++points[i % options.ways];

  static const std::vector<std::string> other_classes = {"primary", "secondary", "tertiary", "service"};
  static const std::vector<std::string> posted = {"25 mph", "30 mph", "40", "35 mph", "none", "25 mph; 15 mph"};

  std::uint64_t way_id = 100000 + rng.index(900000);
  for (std::size_t i = 0; i < options.ways; ++i) {
    SynthWay w;
    way_id += 1 + rng.index(5000);
    w.way_id = way_id;
    w.highway_class = rng.uniform() < options.residential_share ? "residential" : other_classes[rng.index(other_classes.size())];
    if (rng.uniform() < 0.08)
      w.maxspeed_raw = posted[rng.index(posted.size())];
    w.points = points[i];

    const double d = rng.uniform(0.2, 0.6);
    const double nt = rng.uniform(0.05, 0.35);
    w.day_fraction = d;
    w.night_fraction = nt;
    w.other_fraction = 1.0 - d - nt;

    // Most ways see little or no speeding; nights are worse.
    if (rng.uniform() < 0.55) {
      w.aggressive_rate_day = 0.0;
      w.aggressive_rate_night = rng.uniform() < 0.3 ? rng.uniform(0.0, 0.05) : 0.0;
    } else {
      const double base = std::pow(rng.uniform(), 3.0) * 0.6;
      w.aggressive_rate_day = base;
      w.aggressive_rate_night = std::min(1.0, base * rng.uniform(1.0, 3.0));
    }
    if (rng.uniform() < 0.5)
      w.aggressive_rate_other = rng.uniform(0.0, 0.2);
    w.reckless_share_of_aggressive = rng.uniform() < 0.4 ? 0.0 : rng.uniform(0.0, 0.8);
    s.ways.push_back(std::move(w));
  }
  s.validate();
  return s;
}

}  // namespace speedwatch
