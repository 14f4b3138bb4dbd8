#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dmbl {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t position, const std::string& message)
      : Error("parse error at " + std::to_string(position) + ": " + message),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// A construction step would exceed the configured world limit. The model is
/// left exactly as it was before the step was attempted.
class WorldLimitExceeded : public Error {
 public:
  WorldLimitExceeded(std::size_t requested, std::size_t limit)
      : Error("world limit exceeded: step needs " + std::to_string(requested) +
              " worlds, limit is " + std::to_string(limit)),
        requested_(requested),
        limit_(limit) {}

  std::size_t requested() const noexcept { return requested_; }
  std::size_t limit() const noexcept { return limit_; }

 private:
  std::size_t requested_;
  std::size_t limit_;
};

/// The conditioning function has no entry for the requested pair of sets.
class UndefinedConditional : public Error {
 public:
  using Error::Error;
};

/// A probability query needs a strictly positive distribution.
class DegenerateDistribution : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  FormatError(std::size_t line, const std::string& message)
      : Error("line " + std::to_string(line) + ": " + message), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace dmbl
