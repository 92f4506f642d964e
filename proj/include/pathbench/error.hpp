#pragma once

#include <stdexcept>
#include <string>

namespace pathbench {

// Root of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller broke an operation's precondition (blocked cell, out of bounds, bad config).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class GenerationError : public Error {
 public:
  using Error::Error;
};

class UnsupportedError : public Error {
 public:
  using Error::Error;
};

// Malformed input text or document. `line` is 1-based, 0 when not applicable.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what, std::size_t line = 0)
      : Error(line ? what + " (line " + std::to_string(line) + ")" : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_ = 0;
};

class VersionMismatchError : public ParseError {
 public:
  using ParseError::ParseError;
};

class PayloadMismatchError : public ParseError {
 public:
  using ParseError::ParseError;
};

class BlockedEntityError : public ParseError {
 public:
  using ParseError::ParseError;
};

class ProtocolError : public Error {
 public:
  using Error::Error;
};

}  // namespace pathbench
