#pragma once

#include <stdexcept>
#include <string>

namespace evcharge {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Vector lengths disagree (profiles, base loads, bounds).
class LengthMismatch : public Error {
 public:
  using Error::Error;
};

enum class SetViolation {
  LengthMismatch,
  NonFinite,
  BoundsInverted,
  EmptySet,
  InactiveBudgetNonzero,
};

const char* to_string(SetViolation v);

class InvalidSet : public Error {
 public:
  InvalidSet(SetViolation violation, const std::string& detail)
      : Error(std::string(to_string(violation)) + ": " + detail),
        violation_(violation) {}
  SetViolation violation() const { return violation_; }

 private:
  SetViolation violation_;
};

/// The budget multiplier search could not meet its residual tolerance.
class NoConvergence : public Error {
 public:
  using Error::Error;
};

class NotARelaxation : public Error {
 public:
  using Error::Error;
};

class DimensionTooLarge : public Error {
 public:
  using Error::Error;
};

class TraceTooShort : public Error {
 public:
  using Error::Error;
};

/// A trace and a comparator (or bound input) cover different horizons.
class HorizonMismatch : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(int line, const std::string& message)
      : Error("line " + std::to_string(line) + ": " + message), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& message)
      : Error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

class UnknownPreset : public Error {
 public:
  using Error::Error;
};

}  // namespace evcharge
