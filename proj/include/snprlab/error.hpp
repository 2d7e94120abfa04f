#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace snprlab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input text that does not match a grammar. `position` is a 0-based byte
// offset for eNewick and `line` is 1-based for line-oriented formats.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position, std::size_t line = 0)
      : Error(what), position_(position), line_(line) {}
  std::size_t position() const { return position_; }
  std::size_t line() const { return line_; }

 private:
  std::size_t position_;
  std::size_t line_;
};

// A caller passed arguments that violate an operation's precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// A search ran out of its configured budget before finishing.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace snprlab
