#pragma once

// Minimal non-validating XML pull reader: enough for OSM extracts and for
// checking that generated SVG is well formed. Text content is skipped.

#include <cstdint>
#include <istream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "speedwatch/error.hpp"

namespace speedwatch {

class XmlError : public DataError
{
public:
  XmlError(const std::string& what, std::uint64_t line);

  std::uint64_t line() const { return line_; }

private:
  std::uint64_t line_;
};

struct XmlEvent
{
  enum class Kind : std::uint8_t { StartElement, EndElement };

  Kind kind = Kind::StartElement;
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;

  /// Value of attribute `key`, or nullptr.
  const std::string* attribute(std::string_view key) const;
};

class XmlReader
{
public:
  explicit XmlReader(std::string document);
  explicit XmlReader(std::istream& in);

  /// Advances to the next element boundary. A self-closing element yields a
  /// StartElement followed by a matching EndElement. Returns false once the
  /// document is exhausted; throws XmlError if it is not well formed.
  bool next(XmlEvent& event);

  std::size_t depth() const { return open_.size(); }

private:
  void skip_past(std::string_view terminator, const char* what);
  std::string read_name();
  std::string decode(std::string_view raw) const;
  void advance(std::size_t n);
  [[noreturn]] void fail(const std::string& what) const;

  std::string doc_;
  std::size_t pos_ = 0;
  std::uint64_t line_ = 1;
  std::vector<std::string> open_;
  bool pending_end_ = false;
  std::string pending_name_;
  bool saw_element_ = false;
};

/// True if `document` parses as well-formed XML with a single root element.
bool is_well_formed_xml(const std::string& document);

}  // namespace speedwatch
