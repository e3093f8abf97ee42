#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ccbench {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid arguments or configuration values.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed text input. `position()` is a 1-based line number for
/// line-oriented files and a 0-based byte offset for single-line grammars.
class ParseError : public Error {
 public:
  ParseError(std::size_t position, const std::string& what)
      : Error(what), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// A numeric domain violation, e.g. a zero-probability label in a surprisal.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Corpus generation ran out of its resampling budget.
class GenerationError : public Error {
 public:
  using Error::Error;
};

/// A solver broke the line protocol.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

}  // namespace ccbench
