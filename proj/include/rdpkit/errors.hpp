#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace rdpkit {

/// Base class of every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SyntaxError : public Error {
 public:
  SyntaxError(int line, int column, std::vector<std::string> expected, const std::string& found);

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  int line_;
  int column_;
  std::vector<std::string> expected_;
};

class UnknownProposition : public Error {
 public:
  explicit UnknownProposition(const std::string& name)
      : Error("unknown proposition '" + name + "'"), name_(name) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

/// A construction exceeded its configured state budget.
class ResourceLimit : public Error {
 public:
  using Error::Error;
};

class OutOfBounds : public Error {
 public:
  using Error::Error;
};

/// Two or more transition quadruples matched the same (history, action).
class MutualExclusionViolation : public Error {
 public:
  explicit MutualExclusionViolation(std::vector<std::size_t> indices);
  const std::vector<std::size_t>& indices() const noexcept { return indices_; }

 private:
  std::vector<std::size_t> indices_;
};

class InvalidPostState : public Error {
 public:
  using Error::Error;
};

/// Invalid model or experiment configuration; `field` is a dotted path.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& message)
      : Error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class NoConvergence : public Error {
 public:
  explicit NoConvergence(int max_iters)
      : Error("value iteration did not converge within " + std::to_string(max_iters) + " sweeps"),
        max_iters_(max_iters) {}
  int max_iters() const noexcept { return max_iters_; }

 private:
  int max_iters_;
};

class EmptyShield : public Error {
 public:
  using Error::Error;
};

class UnknownPreset : public Error {
 public:
  explicit UnknownPreset(const std::string& name) : Error("unknown preset '" + name + "'") {}
};

/// An operation was called outside its precondition (e.g. stepping a finished episode).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace rdpkit
