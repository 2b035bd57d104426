#pragma once

#include <stdexcept>
#include <string>

namespace folmt {

// Base class for everything thrown by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed surface syntax. Line and column are 1-based; 0 means unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, int line = 0, int col = 0)
      : Error(line > 0 ? msg + " at " + std::to_string(line) + ":" + std::to_string(col) : msg),
        line(line),
        col(col) {}
  int line;
  int col;
};

// A name that the ambient signature does not declare.
class UnknownSymbolError : public Error {
 public:
  explicit UnknownSymbolError(const std::string& name)
      : Error("unknown symbol '" + name + "'"), name(name) {}
  std::string name;
};

// A symbol applied to the wrong number of arguments.
class ArityError : public Error {
 public:
  ArityError(const std::string& sym, unsigned expected, unsigned got)
      : Error("arity mismatch for '" + sym + "': expected " + std::to_string(expected) +
              ", got " + std::to_string(got)) {}
};

// Signature or input data fails a declared precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// A configured search or conversion limit was exceeded.
class CapExceededError : public Error {
 public:
  using Error::Error;
};

// A model handed to a decoding or transport step does not actually satisfy
// the structure the step relies on.
class MalformedModelError : public Error {
 public:
  using Error::Error;
};

}  // namespace folmt
