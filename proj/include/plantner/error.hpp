#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace plantner {

// Base class for every failure caused by input data (as opposed to misuse of
// the command line). The CLI maps these to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed text input. `line` is 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Duplicate keys, conflicting lexicon entries, inconsistent joins.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

// A precondition of an operation was violated by its caller.
class ContractError : public Error {
 public:
  using Error::Error;
};

// A requested size cannot be satisfied by the available data.
class SizingError : public Error {
 public:
  using Error::Error;
};

// Binary file with a wrong magic tag.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Binary file whose body is inconsistent with its header.
class CorruptionError : public Error {
 public:
  using Error::Error;
};

// Non-finite values or otherwise unusable numeric data.
class DataError : public Error {
 public:
  using Error::Error;
};

// Raised when a corpus sentence cannot be matched with its embedding matrix.
class JoinError : public Error {
 public:
  using Error::Error;
};

// The first word of a sentence alone needs more pieces than allowed.
class SentenceTooLongError : public Error {
 public:
  using Error::Error;
};

}  // namespace plantner
