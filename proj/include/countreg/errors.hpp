#pragma once

#include <stdexcept>
#include <string>

namespace countreg {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// text formats: carries the 1-based line (or 0 when unknown) and column for regexes
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, int line = 0, int column = -1)
      : Error(format(msg, line, column)), line_(line), column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  static std::string format(const std::string& msg, int line, int column) {
    std::string s;
    if (line > 0) s += "line " + std::to_string(line) + ": ";
    if (column >= 0) s += "position " + std::to_string(column) + ": ";
    return s + msg;
  }
  int line_;
  int column_;
};

class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

class CapExceeded : public Error {
 public:
  using Error::Error;
};

class MachineTooLarge : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

// default subset/product state budget, overridable through COUNTREG_BUDGET
long default_state_budget();

}  // namespace countreg
