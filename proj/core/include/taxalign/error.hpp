#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace taxalign {

enum class ErrorKind {
  Io,         // file could not be opened or written
  Parse,      // malformed record
  Duplicate,  // repeated node id
  Reference,  // dangling id
  Cycle,      // hypernym graph is not acyclic
  Format,     // malformed constraint code or pattern
  Config,     // invalid option combination
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Malformed input record; line numbers are 1-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(ErrorKind::Parse, "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class CycleError : public Error {
 public:
  explicit CycleError(std::string node)
      : Error(ErrorKind::Cycle, "hypernym cycle through node '" + node + "'"),
        node_(std::move(node)) {}

  const std::string& node() const noexcept { return node_; }

 private:
  std::string node_;
};

}  // namespace taxalign
