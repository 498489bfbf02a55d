// errors.hpp — exception types shared across the library.
#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace evodyn {

// Base class for every error the library raises.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Vector/matrix dimensions do not agree.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// Rendering was asked for a dimension it does not support.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Candidate state violates the simplex invariants (negative coordinate or
// coordinate sum too far from 1).
class InvalidSimplexPoint : public Error {
 public:
  using Error::Error;
};

// Normalized field requested but |mean fitness| <= 1e-9; the caller must use
// the unnormalized form (zero-sum or balanced landscape).
class NearZeroMeanFitness : public Error {
 public:
  using Error::Error;
};

// A discrete step produced a negative coordinate. Carries the offending
// state so the caller can report it; never silently corrected.
class StateLeftSimplex : public Error {
 public:
  StateLeftSimplex(const std::string& what, std::vector<double> state)
      : Error(what), state_(std::move(state)) {}
  [[nodiscard]] const std::vector<double>& state() const noexcept { return state_; }

 private:
  std::vector<double> state_;
};

// beta = 1 makes the 1/(1-beta) coefficient undefined.
class BetaSingularity : public Error {
 public:
  using Error::Error;
};

// KL divergence is +infinity: reference puts mass where x has none.
class SupportViolation : public Error {
 public:
  using Error::Error;
};

// log argument <= 0; the step is far outside the valid region.
class NonpositiveArgument : public Error {
 public:
  using Error::Error;
};

// Config file is syntactically unusable at a given line.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  explicit ParseError(const std::string& what) : Error(what), line_(0) {}
  [[nodiscard]] std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// A field is missing or out of range. Names the field.
class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& what)
      : Error(what), field_(std::move(field)) {}
  [[nodiscard]] const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace evodyn
