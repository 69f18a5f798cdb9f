#include "speedwatch/report.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "speedwatch/text.hpp"

namespace speedwatch {

namespace {

std::string fixed2(double v)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string coord(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string xml_escape(std::string_view s)
{
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace

void write_cdf_csv(const CdfSeries& series, std::ostream& out)
{
  out << kCdfHeader << '\n';
  for (const auto& p : series.points)
    out << text::format_real(p.value_percent) << ',' << text::format_real(p.cum_fraction) << '\n';
}

void write_top_n_csv(const AnonymizedTable& table, std::ostream& out)
{
  out << kTopNHeader << '\n';
  for (const auto& r : table.rows) {
    out << r.alias << ',' << r.total_rows << ',' << fixed2(r.percent) << ',' << fixed2(r.avg_speed) << ','
        << (r.speed_sd ? fixed2(*r.speed_sd) : std::string()) << ',' << fixed2(r.limit_kmh) << '\n';
  }
}

void write_crash_frequency_csv(const CrashFrequencyTable& table, std::ostream& out)
{
  out << kCrashFrequencyHeader << '\n';
  for (const auto& [crashes, ways] : table.rows)
    out << crashes << ',' << ways << '\n';
  out << "no_info," << table.no_info << '\n';
}

nlohmann::json day_night_json(const DayNightResult& r)
{
  nlohmann::json j = {{"higher_day", r.higher_day}, {"higher_night", r.higher_night}, {"excluded", r.excluded}};
  if (r.higher_day > 0)
    j["night_to_day_way_ratio"] = static_cast<double>(r.higher_night) / static_cast<double>(r.higher_day);
  return j;
}

std::string render_cdf_svg(const CdfSeries& series)
{
  constexpr double width = 640, height = 420;
  constexpr double left = 70, right = 20, top = 40, bottom = 60;
  constexpr double plot_w = width - left - right, plot_h = height - top - bottom;
  auto x_of = [&](double pct) { return left + plot_w * pct / 100.0; };
  auto y_of = [&](double frac) { return top + plot_h * (1.0 - frac); };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n"
      << "  <rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n"
      << "  <text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">"
      << "Cumulative distribution of " << xml_escape(series.metric_name) << " per way</text>\n";

  svg << "  <g stroke=\"#999\" stroke-width=\"1\">\n";
  for (int i = 0; i <= 5; ++i) {
    const double gx = x_of(i * 20.0);
    const double gy = y_of(i * 0.2);
    svg << "    <line x1=\"" << coord(gx) << "\" y1=\"" << coord(top) << "\" x2=\"" << coord(gx) << "\" y2=\""
        << coord(top + plot_h) << "\" stroke-dasharray=\"2,3\"/>\n"
        << "    <line x1=\"" << coord(left) << "\" y1=\"" << coord(gy) << "\" x2=\"" << coord(left + plot_w)
        << "\" y2=\"" << coord(gy) << "\" stroke-dasharray=\"2,3\"/>\n";
  }
  svg << "  </g>\n";

  svg << "  <g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (int i = 0; i <= 5; ++i) {
    svg << "    <text x=\"" << coord(x_of(i * 20.0)) << "\" y=\"" << coord(top + plot_h + 16)
        << "\" text-anchor=\"middle\">" << i * 20 << "</text>\n"
        << "    <text x=\"" << coord(left - 8) << "\" y=\"" << coord(y_of(i * 0.2) + 4) << "\" text-anchor=\"end\">"
        << fixed2(i * 0.2) << "</text>\n";
  }
  svg << "  </g>\n";

  svg << "  <rect x=\"" << coord(left) << "\" y=\"" << coord(top) << "\" width=\"" << coord(plot_w)
      << "\" height=\"" << coord(plot_h) << "\" fill=\"none\" stroke=\"black\"/>\n"
      << "  <text x=\"" << coord(left + plot_w / 2) << "\" y=\"" << coord(height - 16)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << xml_escape(series.metric_name)
      << " of trajectory points</text>\n"
      << "  <text x=\"18\" y=\"" << coord(top + plot_h / 2) << "\" text-anchor=\"middle\" font-family=\"sans-serif\""
      << " font-size=\"13\" transform=\"rotate(-90 18 " << coord(top + plot_h / 2)
      << ")\">cumulative share of ways</text>\n";

  // Step function: flat at the previous level up to each breakpoint, then a jump.
  svg << "  <polyline fill=\"none\" stroke=\"#1f5fa8\" stroke-width=\"2\" points=\"";
  double level = 0.0;
  svg << coord(x_of(0.0)) << ',' << coord(y_of(0.0));
  for (const auto& p : series.points) {
    svg << ' ' << coord(x_of(p.value_percent)) << ',' << coord(y_of(level)) << ' ' << coord(x_of(p.value_percent))
        << ',' << coord(y_of(p.cum_fraction));
    level = p.cum_fraction;
  }
  svg << ' ' << coord(x_of(100.0)) << ',' << coord(y_of(level)) << "\"/>\n";
  svg << "</svg>\n";
  return svg.str();
}

void emit_cdf_svg(const CdfSeries& series, const std::filesystem::path& path)
{
  write_file_atomic(path, render_cdf_svg(series));
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content)
{
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f)
      throw IoError("cannot write " + path.string());
    f << content;
    f.flush();
    if (!f)
      throw IoError("write failed for " + path.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot write " + path.string());
  }
}

}  // namespace speedwatch
