#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace memsim {

// Malformed or inconsistent input: bad files, shape mismatches, violated preconditions.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ParseErrorKind { MalformedToken, NonIntegerId };

const char* to_string(ParseErrorKind kind);

// Failure to parse one step line. `step_index` is filled in when the line came
// from a trajectory document.
class ParseError : public InputError {
 public:
  ParseError(ParseErrorKind kind, std::string message, std::size_t column)
      : InputError(std::string(to_string(kind)) + " at column " + std::to_string(column) + ": " +
                   message),
        kind_(kind),
        column_(column),
        detail_(std::move(message)) {}

  ParseErrorKind kind() const { return kind_; }
  std::size_t column() const { return column_; }
  const std::string& detail() const { return detail_; }

 private:
  ParseErrorKind kind_;
  std::size_t column_;
  std::string detail_;
};

class TrajectoryParseError : public InputError {
 public:
  TrajectoryParseError(std::size_t step_index, const ParseError& cause)
      : TrajectoryParseError("step " + std::to_string(step_index) + ": " + cause.what(),
                             step_index, cause.kind()) {}
  TrajectoryParseError(const std::string& message, std::size_t step_index, ParseErrorKind kind)
      : InputError(message), step_index_(step_index), kind_(kind) {}

  TrajectoryParseError with_context(const std::string& prefix) const {
    return {prefix + ": " + what(), step_index_, kind_};
  }

  std::size_t step_index() const { return step_index_; }
  ParseErrorKind kind() const { return kind_; }

 private:
  std::size_t step_index_;
  ParseErrorKind kind_;
};

// Domain failure that is not an input problem (e.g. fusing against an empty bank).
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace memsim
