#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pmsearch {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Input could not be parsed. `line()` is 1-based, or 0 when the error is not
/// tied to a particular line.
class ParseError : public Error {
  public:
    ParseError(std::string const& what, std::size_t line = 0)
        : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), m_line(line)
    {}

    [[nodiscard]] std::size_t line() const noexcept { return m_line; }

  private:
    std::size_t m_line;
};

}  // namespace pmsearch
