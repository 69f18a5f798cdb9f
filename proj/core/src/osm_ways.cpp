#include "speedwatch/osm_ways.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>

#include "speedwatch/error.hpp"
#include "speedwatch/text.hpp"
#include "speedwatch/xml_reader.hpp"

namespace speedwatch {

namespace {

// Plain positive decimal: digits with at most one '.', at least one digit.
bool is_plain_decimal(std::string_view s)
{
  bool digit = false;
  bool dot = false;
  for (char c : s) {
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digit = true;
    } else if (c == '.' && !dot) {
      dot = true;
    } else {
      return false;
    }
  }
  return digit;
}

// n * 1.609344 formed exactly in decimal, then rounded once to double, so
// "35 mph" is 56.32704 and not the product of two rounded doubles.
// Returns nullopt when the digits are too long for 64-bit arithmetic.
std::optional<double> mph_to_kmh_decimal(std::string_view decimal)
{
  std::uint64_t digits = 0;
  int scale = 0;
  int significant = 0;
  bool after_dot = false;
  for (char c : decimal) {
    if (c == '.') {
      after_dot = true;
      continue;
    }
    if (digits == 0 && c == '0') {
      scale += after_dot;
      continue;
    }
    if (++significant > 12)
      return std::nullopt;
    digits = digits * 10 + static_cast<std::uint64_t>(c - '0');
    scale += after_dot;
  }
  const std::uint64_t micro_kmh_per_mph = 1'609'344;
  const std::string product = std::to_string(digits * micro_kmh_per_mph) + "e-" + std::to_string(scale + 6);
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(product.data(), product.data() + product.size(), out);
  if (ec != std::errc{} || ptr != product.data() + product.size())
    return std::nullopt;
  return out;
}

[[noreturn]] void malformed(std::uint64_t line, const std::string& what)
{
  throw DataError("way table line " + std::to_string(line) + ": MalformedRow: " + what);
}

}  // namespace

std::optional<double> parse_maxspeed(std::string_view raw)
{
  auto s = text::trim(raw);
  double factor = 1.0;
  for (const auto& [unit, f] : {std::pair<std::string_view, double>{"mph", kKmhPerMph}, {"km/h", 1.0}}) {
    if (s.ends_with(unit)) {
      s = text::trim(s.substr(0, s.size() - unit.size()));
      factor = f;
      break;
    }
  }
  if (!is_plain_decimal(s))
    return std::nullopt;
  const auto value = text::parse_double(s);
  if (!value || !(*value > 0.0))
    return std::nullopt;
  if (factor == 1.0)
    return *value;
  if (const auto exact = mph_to_kmh_decimal(s))
    return *exact;
  return *value * factor;
}

bool WayTable::upsert(WayRecord record)
{
  const auto id = record.way_id;
  auto [it, inserted] = ways_.insert_or_assign(id, std::move(record));
  return !inserted;
}

const WayRecord* WayTable::find(std::uint64_t way_id) const
{
  const auto it = ways_.find(way_id);
  return it == ways_.end() ? nullptr : &it->second;
}

std::vector<const WayRecord*> WayTable::sorted() const
{
  std::vector<const WayRecord*> out;
  out.reserve(ways_.size());
  for (const auto& [id, rec] : ways_)
    out.push_back(&rec);
  std::sort(out.begin(), out.end(), [](auto* a, auto* b) { return a->way_id < b->way_id; });
  return out;
}

OsmParseResult parse_osm_xml(std::istream& in)
{
  OsmParseResult result;
  XmlReader reader(in);
  XmlEvent ev;

  std::vector<std::uint64_t> seen_ids;
  std::optional<WayRecord> current;
  bool current_has_highway = false;

  while (reader.next(ev)) {
    if (ev.kind == XmlEvent::Kind::StartElement) {
      if (ev.name == "way") {
        if (current)
          throw DataError("nested <way> elements");
        const auto* id_attr = ev.attribute("id");
        const auto id = id_attr ? text::parse_u64(*id_attr) : std::nullopt;
        if (!id)
          throw DataError("<way> without a valid id attribute");
        current = WayRecord{};
        current->way_id = *id;
        current_has_highway = false;
      } else if (ev.name == "tag" && current) {
        const auto* k = ev.attribute("k");
        const auto* v = ev.attribute("v");
        if (!k || !v)
          continue;
        if (*k == "highway") {
          current->highway_class = *v;
          current_has_highway = true;
        } else if (*k == "maxspeed") {
          current->maxspeed_raw = *v;
          current->maxspeed_kmh = parse_maxspeed(*v);
        }
      }
    } else if (ev.name == "way" && current) {
      ++result.ways_seen;
      seen_ids.push_back(current->way_id);
      if (current_has_highway) {
        result.table.upsert(std::move(*current));
      } else {
        ++result.ways_without_highway;
        result.table.erase(current->way_id);  // last occurrence wins
      }
      current.reset();
    }
  }

  std::sort(seen_ids.begin(), seen_ids.end());
  for (std::size_t i = 1; i < seen_ids.size(); ++i) {
    if (seen_ids[i] == seen_ids[i - 1])
      ++result.duplicate_way_ids;
  }
  return result;
}

void emit_way_table(const WayTable& table, std::ostream& out)
{
  out << kWayTableHeader << '\n';
  for (const auto* rec : table.sorted()) {
    out << rec->way_id << ',' << text::quote_csv(rec->highway_class) << ',';
    if (rec->maxspeed_raw) {
      // A present-but-empty raw value is written as "" to keep it distinct from absent.
      out << (rec->maxspeed_raw->empty() ? std::string("\"\"") : text::quote_csv(*rec->maxspeed_raw));
    }
    out << ',';
    if (rec->maxspeed_kmh)
      out << text::format_real(*rec->maxspeed_kmh, 6);
    out << '\n';
  }
}

WayTable load_way_table(std::istream& in)
{
  WayTable table;
  std::string line;
  std::vector<std::string> fields;
  std::vector<bool> quoted;
  std::uint64_t line_no = 0;
  bool header = false;

  while (std::getline(in, line)) {
    ++line_no;
    text::chomp(line);
    if (text::trim(line).empty())
      continue;
    if (!text::split_csv(line, fields, &quoted))
      malformed(line_no, "unterminated quote");
    if (!header) {
      if (fields.size() != 4 || fields[0] != "way_id" || fields[1] != "highway_class" ||
          fields[2] != "maxspeed_raw" || fields[3] != "maxspeed_kmh")
        malformed(line_no, "expected header '" + std::string(kWayTableHeader) + "'");
      header = true;
      continue;
    }
    if (fields.size() != 4)
      malformed(line_no, "expected 4 fields, got " + std::to_string(fields.size()));

    WayRecord rec;
    const auto id = text::parse_u64(fields[0]);
    if (!id)
      malformed(line_no, "way_id is not an unsigned integer");
    rec.way_id = *id;
    if (fields[1].empty())
      malformed(line_no, "empty highway_class");
    rec.highway_class = fields[1];
    if (!fields[2].empty() || quoted[2])
      rec.maxspeed_raw = fields[2];
    if (!fields[3].empty()) {
      const auto kmh = text::parse_double(fields[3]);
      if (!kmh || !(*kmh > 0.0) || !std::isfinite(*kmh))
        malformed(line_no, "maxspeed_kmh must be a positive number");
      if (!rec.maxspeed_raw)
        malformed(line_no, "maxspeed_kmh present without maxspeed_raw");
      rec.maxspeed_kmh = *kmh;
    }
    if (table.upsert(std::move(rec)))
      malformed(line_no, "duplicate way_id " + fields[0]);
  }
  if (in.bad())
    throw IoError("way table stream unreadable");
  if (!header)
    malformed(line_no, "missing header");
  return table;
}

}  // namespace speedwatch
