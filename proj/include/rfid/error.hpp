#pragma once

#include <stdexcept>
#include <string>

namespace rfid {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file. The message carries the path and line number.
class ParseError : public Error
{
  public:
    ParseError(const std::string& path, std::size_t line, const std::string& what)
        : Error(path + ":" + std::to_string(line) + ": " + what), line_(line)
    {
    }

    std::size_t line() const noexcept { return line_; }

  private:
    std::size_t line_;
};

}  // namespace rfid
