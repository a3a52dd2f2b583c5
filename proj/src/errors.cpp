#include "rdpkit/errors.hpp"

namespace rdpkit {

namespace {

std::string syntax_message(int line, int column, const std::vector<std::string>& expected,
                           const std::string& found) {
  std::string msg = "syntax error at " + std::to_string(line) + ":" + std::to_string(column) + ": expected ";
  if (expected.size() > 1) msg += "one of ";
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (i) msg += ", ";
    msg += expected[i];
  }
  msg += ", found " + found;
  return msg;
}

std::string exclusion_message(const std::vector<std::size_t>& indices) {
  std::string msg = "transition quadruples are not mutually exclusive: indices";
  for (auto i : indices) msg += " " + std::to_string(i);
  return msg;
}

}  // namespace

SyntaxError::SyntaxError(int line, int column, std::vector<std::string> expected, const std::string& found)
    : Error(syntax_message(line, column, expected, found)),
      line_(line),
      column_(column),
      expected_(std::move(expected)) {}

MutualExclusionViolation::MutualExclusionViolation(std::vector<std::size_t> indices)
    : Error(exclusion_message(indices)), indices_(std::move(indices)) {}

}  // namespace rdpkit
