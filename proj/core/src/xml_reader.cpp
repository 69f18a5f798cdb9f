#include "speedwatch/xml_reader.hpp"

#include <cctype>
#include <charconv>
#include <iterator>

namespace speedwatch {

namespace {

bool is_name_start(char c)
{
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == ':' ||
         static_cast<unsigned char>(c) >= 0x80;
}

bool is_name_char(char c)
{
  return is_name_start(c) || std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '.';
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

void append_utf8(std::string& out, std::uint32_t cp)
{
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

}  // namespace

XmlError::XmlError(const std::string& what, std::uint64_t line)
  : DataError("malformed XML at line " + std::to_string(line) + ": " + what)
  , line_(line)
{}

const std::string* XmlEvent::attribute(std::string_view key) const
{
  for (const auto& [k, v] : attributes) {
    if (k == key)
      return &v;
  }
  return nullptr;
}

XmlReader::XmlReader(std::string document)
  : doc_(std::move(document))
{}

XmlReader::XmlReader(std::istream& in)
  : doc_(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>())
{
  if (in.bad())
    throw IoError("XML stream unreadable");
}

void XmlReader::fail(const std::string& what) const { throw XmlError(what, line_); }

void XmlReader::advance(std::size_t n)
{
  const auto end = std::min(pos_ + n, doc_.size());
  for (; pos_ < end; ++pos_) {
    if (doc_[pos_] == '\n')
      ++line_;
  }
}

void XmlReader::skip_past(std::string_view terminator, const char* what)
{
  const auto at = doc_.find(terminator, pos_);
  if (at == std::string::npos)
    fail(std::string("unterminated ") + what);
  advance(at + terminator.size() - pos_);
}

std::string XmlReader::read_name()
{
  if (pos_ >= doc_.size() || !is_name_start(doc_[pos_]))
    fail("expected a name");
  const auto start = pos_;
  while (pos_ < doc_.size() && is_name_char(doc_[pos_]))
    ++pos_;
  return doc_.substr(start, pos_ - start);
}

std::string XmlReader::decode(std::string_view raw) const
{
  std::string out;
  out.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] == '<')
      fail("'<' in attribute value");
    if (raw[i] != '&') {
      out.push_back(raw[i]);
      continue;
    }
    const auto semi = raw.find(';', i);
    if (semi == std::string_view::npos)
      fail("unterminated entity");
    const auto entity = raw.substr(i + 1, semi - i - 1);
    if (entity == "amp") out.push_back('&');
    else if (entity == "lt") out.push_back('<');
    else if (entity == "gt") out.push_back('>');
    else if (entity == "quot") out.push_back('"');
    else if (entity == "apos") out.push_back('\'');
    else if (entity.size() > 1 && entity[0] == '#') {
      const bool hex = entity[1] == 'x' || entity[1] == 'X';
      const auto digits = entity.substr(hex ? 2 : 1);
      std::uint32_t cp = 0;
      const auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), cp, hex ? 16 : 10);
      if (digits.empty() || ec != std::errc() || p != digits.data() + digits.size() || cp > 0x10FFFF)
        fail("bad character reference");
      append_utf8(out, cp);
    } else {
      fail("unknown entity '&" + std::string(entity) + ";'");
    }
    i = semi;
  }
  return out;
}

bool XmlReader::next(XmlEvent& event)
{
  if (pending_end_) {
    pending_end_ = false;
    event.kind = XmlEvent::Kind::EndElement;
    event.name = std::move(pending_name_);
    event.attributes.clear();
    return true;
  }

  while (true) {
    const auto lt = doc_.find('<', pos_);
    if (lt == std::string::npos) {
      advance(doc_.size() - pos_);
      if (!open_.empty())
        fail("unclosed element <" + open_.back() + ">");
      if (!saw_element_)
        fail("no elements");
      return false;
    }
    if (open_.empty()) {
      for (auto i = pos_; i < lt; ++i) {
        if (!is_space(doc_[i]))
          fail("text outside of any element");
      }
    }
    advance(lt - pos_);

    const std::string_view rest(doc_.data() + pos_, doc_.size() - pos_);
    if (rest.starts_with("<?")) {
      skip_past("?>", "processing instruction");
      continue;
    }
    if (rest.starts_with("<!--")) {
      skip_past("-->", "comment");
      continue;
    }
    if (rest.starts_with("<![CDATA[")) {
      if (open_.empty())
        fail("CDATA outside of any element");
      skip_past("]]>", "CDATA section");
      continue;
    }
    if (rest.starts_with("<!")) {
      // DOCTYPE; internal subsets with nested '>' are not supported.
      skip_past(">", "declaration");
      continue;
    }

    if (rest.starts_with("</")) {
      advance(2);
      auto name = read_name();
      while (pos_ < doc_.size() && is_space(doc_[pos_]))
        advance(1);
      if (pos_ >= doc_.size() || doc_[pos_] != '>')
        fail("expected '>' after </" + name);
      advance(1);
      if (open_.empty() || open_.back() != name)
        fail("unexpected </" + name + ">");
      open_.pop_back();
      event.kind = XmlEvent::Kind::EndElement;
      event.name = std::move(name);
      event.attributes.clear();
      return true;
    }

    advance(1);
    event.kind = XmlEvent::Kind::StartElement;
    event.name = read_name();
    event.attributes.clear();
    while (true) {
      const auto before = pos_;
      while (pos_ < doc_.size() && is_space(doc_[pos_]))
        advance(1);
      if (pos_ >= doc_.size())
        fail("unterminated tag <" + event.name);
      if (doc_[pos_] == '>') {
        advance(1);
        open_.push_back(event.name);
        break;
      }
      if (doc_.compare(pos_, 2, "/>") == 0) {
        advance(2);
        pending_end_ = true;
        pending_name_ = event.name;
        break;
      }
      if (pos_ == before)
        fail("expected whitespace between attributes");
      auto key = read_name();
      while (pos_ < doc_.size() && is_space(doc_[pos_]))
        advance(1);
      if (pos_ >= doc_.size() || doc_[pos_] != '=')
        fail("expected '=' after attribute " + key);
      advance(1);
      while (pos_ < doc_.size() && is_space(doc_[pos_]))
        advance(1);
      if (pos_ >= doc_.size() || (doc_[pos_] != '"' && doc_[pos_] != '\''))
        fail("expected quoted value for attribute " + key);
      const char quote = doc_[pos_];
      const auto close = doc_.find(quote, pos_ + 1);
      if (close == std::string::npos)
        fail("unterminated attribute value");
      auto value = decode(std::string_view(doc_).substr(pos_ + 1, close - pos_ - 1));
      advance(close + 1 - pos_);
      for (const auto& [k, v] : event.attributes) {
        if (k == key)
          fail("duplicate attribute " + key);
      }
      event.attributes.emplace_back(std::move(key), std::move(value));
    }
    saw_element_ = true;
    return true;
  }
}

bool is_well_formed_xml(const std::string& document)
{
  try {
    XmlReader reader(document);
    XmlEvent ev;
    int roots = 0;
    while (reader.next(ev)) {
      if (ev.kind == XmlEvent::Kind::EndElement && reader.depth() == 0)
        ++roots;
    }
    return roots == 1;
  } catch (const XmlError&) {
    return false;
  }
}

}  // namespace speedwatch
