#pragma once

// Small text helpers shared by the CSV readers and writers.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace speedwatch::text {

std::string_view trim(std::string_view s);

/// Splits one CSV record (RFC 4180 quoting, no embedded newlines) into
/// `fields`, reusing its storage. `quoted[i]` tells whether field i was quoted,
/// which is how an empty-but-present value is told apart from a missing one.
/// Returns false on an unterminated quote.
bool split_csv(std::string_view line, std::vector<std::string>& fields,
               std::vector<bool>* quoted = nullptr);

/// Quotes a field only when it contains a delimiter, quote, or line break.
std::string quote_csv(std::string_view field);

std::optional<double> parse_double(std::string_view s);
std::optional<std::uint64_t> parse_u64(std::string_view s);
std::optional<std::int64_t> parse_i64(std::string_view s);

/// Shortest fixed-notation representation that parses back to the same double,
/// zero-padded to at least `min_decimals` fractional digits.
std::string format_real(double value, int min_decimals = 0);

/// Removes a trailing '\r' left by CRLF files.
inline void chomp(std::string& line)
{
  if (!line.empty() && line.back() == '\r')
    line.pop_back();
}

}  // namespace speedwatch::text
