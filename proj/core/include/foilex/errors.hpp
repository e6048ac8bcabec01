#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace foilex {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or unsupported PDDL input. Carries the 1-based source position.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : Error(message + " (line " + std::to_string(line) + ", column " +
              std::to_string(column) + ")"),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// A requirement flag or language feature outside the supported STRIPS subset.
class UnsupportedFeatureError : public ParseError {
 public:
  UnsupportedFeatureError(const std::string& feature, std::size_t line, std::size_t column)
      : ParseError("unsupported PDDL feature '" + feature + "'", line, column),
        feature_(feature) {}

  const std::string& feature() const { return feature_; }

 private:
  std::string feature_;
};

/// Domain/problem mismatch discovered while grounding (unknown types, objects...).
class GroundingError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration or argument values (unit ids, fractions, files).
class InputError : public Error {
 public:
  using Error::Error;
};

/// A plan or foil names an action that does not exist in the ground model.
class UnknownActionError : public Error {
 public:
  explicit UnknownActionError(const std::string& name)
      : Error("unknown action '" + name + "'"), name_(name) {}

  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

/// A configurable size cap (grounding, belief states, enumeration) was exceeded.
class ResourceLimitError : public Error {
 public:
  using Error::Error;
};

/// No lattice member is consistent with the foils, even the most abstract one.
class InconsistentFoilsError : public Error {
 public:
  using Error::Error;
};

/// No set of concretizations refutes every foil.
class InfeasibleExplanationError : public Error {
 public:
  using Error::Error;
};

}  // namespace foilex
