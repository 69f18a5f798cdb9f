#include "speedwatch/text.hpp"

#include <charconv>
#include <cmath>
#include <system_error>

namespace speedwatch::text {

std::string_view trim(std::string_view s)
{
  constexpr std::string_view ws = " \t\r\n\f\v";
  const auto first = s.find_first_not_of(ws);
  if (first == std::string_view::npos)
    return {};
  const auto last = s.find_last_not_of(ws);
  return s.substr(first, last - first + 1);
}

bool split_csv(std::string_view line, std::vector<std::string>& fields, std::vector<bool>* quoted)
{
  std::size_t count = 0;
  auto next_field = [&]() -> std::string& {
    if (count == fields.size())
      fields.emplace_back();
    auto& f = fields[count++];
    f.clear();
    return f;
  };
  if (quoted)
    quoted->clear();

  std::size_t i = 0;
  const std::size_t n = line.size();
  while (true) {
    auto& field = next_field();
    bool was_quoted = false;
    if (i < n && line[i] == '"') {
      was_quoted = true;
      ++i;
      bool closed = false;
      while (i < n) {
        if (line[i] == '"') {
          if (i + 1 < n && line[i + 1] == '"') {
            field.push_back('"');
            i += 2;
          } else {
            ++i;
            closed = true;
            break;
          }
        } else {
          field.push_back(line[i++]);
        }
      }
      if (!closed)
        return false;
      // Anything between the closing quote and the delimiter is kept verbatim.
      while (i < n && line[i] != ',')
        field.push_back(line[i++]);
    } else {
      const auto comma = line.find(',', i);
      const auto end = comma == std::string_view::npos ? n : comma;
      field.assign(line.substr(i, end - i));
      i = end;
    }
    if (quoted)
      quoted->push_back(was_quoted);
    if (i >= n)
      break;
    ++i;  // skip ','
  }
  fields.resize(count);
  return true;
}

std::string quote_csv(std::string_view field)
{
  if (field.find_first_of(",\"\r\n") == std::string_view::npos)
    return std::string(field);
  std::string out;
  out.reserve(field.size() + 2);
  out.push_back('"');
  for (char c : field) {
    if (c == '"')
      out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::optional<double> parse_double(std::string_view s)
{
  s = trim(s);
  if (s.empty())
    return std::nullopt;
  if (s.front() == '+')
    s.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size())
    return std::nullopt;
  return value;
}

std::optional<std::uint64_t> parse_u64(std::string_view s)
{
  s = trim(s);
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    return std::nullopt;
  return value;
}

std::optional<std::int64_t> parse_i64(std::string_view s)
{
  s = trim(s);
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    return std::nullopt;
  return value;
}

std::string format_real(double value, int min_decimals)
{
  if (!std::isfinite(value))
    return std::isnan(value) ? "nan" : (value > 0 ? "inf" : "-inf");
  char buf[400];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed);
  std::string out(buf, ec == std::errc() ? ptr : buf);
  const auto dot = out.find('.');
  int decimals = dot == std::string::npos ? 0 : static_cast<int>(out.size() - dot - 1);
  if (decimals < min_decimals) {
    if (dot == std::string::npos)
      out.push_back('.');
    out.append(static_cast<std::size_t>(min_decimals - decimals), '0');
  }
  return out;
}

}  // namespace speedwatch::text
