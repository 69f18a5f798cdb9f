#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace speedwatch {

inline constexpr double kKmhPerMph = 1.609344;

/// OSM way metadata relevant to speed analysis.
struct WayRecord
{
  std::uint64_t way_id = 0;
  std::string highway_class;
  std::optional<std::string> maxspeed_raw;
  std::optional<double> maxspeed_kmh;  // present => maxspeed_raw present and > 0

  friend bool operator==(const WayRecord&, const WayRecord&) = default;
};

/// Normalizes an OSM maxspeed value to km/h.
///
/// Accepted forms (surrounding whitespace ignored, units lowercase):
///   "<n>"       km/h
///   "<n> km/h"  km/h ("<n>km/h" also accepted)
///   "<n> mph"   miles per hour, converted with the exact factor 1.609344
///               (the decimal product, rounded once)
/// where <n> is a plain positive decimal. Everything else ("none", "signals",
/// "walk", "50; 30", "RU:urban", ...) yields nullopt.
std::optional<double> parse_maxspeed(std::string_view raw);

/// Way records keyed by way ID.
class WayTable
{
public:
  /// Inserts or replaces. Returns true if an existing record was replaced.
  bool upsert(WayRecord record);
  bool erase(std::uint64_t way_id) { return ways_.erase(way_id) > 0; }

  const WayRecord* find(std::uint64_t way_id) const;
  std::size_t size() const { return ways_.size(); }
  bool empty() const { return ways_.empty(); }

  /// Records in ascending way_id order.
  std::vector<const WayRecord*> sorted() const;

  friend bool operator==(const WayTable&, const WayTable&) = default;

private:
  std::unordered_map<std::uint64_t, WayRecord> ways_;
};

struct OsmParseResult
{
  WayTable table;
  std::uint64_t ways_seen = 0;
  std::uint64_t ways_without_highway = 0;
  std::uint64_t duplicate_way_ids = 0;
};

/// Reads `way` elements and their `tag` children from an OSM XML document or
/// fragment. Ways without a `highway` tag are dropped; for repeated way IDs
/// the last occurrence wins. Throws XmlError on malformed XML.
OsmParseResult parse_osm_xml(std::istream& in);

inline constexpr std::string_view kWayTableHeader = "way_id,highway_class,maxspeed_raw,maxspeed_kmh";

void emit_way_table(const WayTable& table, std::ostream& out);

/// Throws DataError ("MalformedRow") on a bad row, including kmh without raw.
WayTable load_way_table(std::istream& in);

}  // namespace speedwatch
