#pragma once

#include <stdexcept>
#include <string>

namespace speedwatch {

class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration or usage. Maps to CLI exit code 2.
class ConfigError : public Error
{
public:
  using Error::Error;
};

/// A file or stream could not be opened, read, or written.
class IoError : public Error
{
public:
  using Error::Error;
};

/// Input data violates its format (malformed row, unbalanced XML, ...).
class DataError : public Error
{
public:
  using Error::Error;
};

}  // namespace speedwatch
