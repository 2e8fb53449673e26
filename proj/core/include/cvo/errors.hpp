#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cvo {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Logarithm requested for a rotation too close to pi to be well defined.
class AngleNearPi : public Error {
 public:
  using Error::Error;
};

/// No point pair survived sparsification.
class EmptyPairSet : public Error {
 public:
  using Error::Error;
};

/// Registration could not start: clouds do not overlap even at the largest length-scale.
class RegistrationFailed : public Error {
 public:
  using Error::Error;
};

class NotAchievable : public Error {
 public:
  using Error::Error;
};

class InsufficientPoints : public Error {
 public:
  InsufficientPoints(const std::string& what, std::size_t found, bool fallback_engaged)
      : Error(what), found_(found), fallback_engaged_(fallback_engaged) {}

  std::size_t found() const noexcept { return found_; }
  bool fallback_engaged() const noexcept { return fallback_engaged_; }

 private:
  std::size_t found_;
  bool fallback_engaged_;
};

class MissingFile : public Error {
 public:
  using Error::Error;
};

/// Malformed input text; carries the 1-based line number of the offending line.
class ParseError : public Error {
 public:
  ParseError(const std::string& file, std::size_t line, const std::string& reason)
      : Error(file + ":" + std::to_string(line) + ": " + reason), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class NoOverlap : public Error {
 public:
  using Error::Error;
};

class InvalidConfig : public Error {
 public:
  using Error::Error;
};

}  // namespace cvo
