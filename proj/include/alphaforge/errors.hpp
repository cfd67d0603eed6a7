#ifndef ALPHAFORGE_ERRORS_HPP_
#define ALPHAFORGE_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace alphaforge {

// Bad run configuration / unparseable config file. CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Filesystem / CSV / checkpoint I/O failure. CLI exit code 3.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// Non-finite loss or gradient; training cannot continue. CLI exit code 4.
class NumericAbort : public std::runtime_error {
 public:
  explicit NumericAbort(const std::string& what) : std::runtime_error(what) {}
};

// Word not in the vocabulary, or BEG/SEP out of place.
class TokenizeError : public std::runtime_error {
 public:
  enum class Kind { UnknownToken, MisplacedIndicator };

  TokenizeError(Kind kind, std::string word, std::size_t position,
                const std::string& what)
      : std::runtime_error(what), kind(kind), word(std::move(word)),
        position(position) {}

  Kind kind;
  std::string word;
  std::size_t position;
};

// RPN sequence does not parse into a single expression tree.
class ParseError : public std::runtime_error {
 public:
  enum class Kind {
    ArityUnderflow,
    DanglingOperands,
    TimeSpanMisuse,
    MissingSeparator,
  };

  ParseError(Kind kind, std::size_t step, const std::string& what)
      : std::runtime_error(what), kind(kind), step(step) {}

  Kind kind;
  std::size_t step;  // token index at which the parse failed; operand count
                     // for DanglingOperands
};

// Caller asked to evaluate days with less history than the tree needs.
class InsufficientHistoryError : public std::runtime_error {
 public:
  InsufficientHistoryError(int required, int available)
      : std::runtime_error("insufficient history: tree needs " +
                           std::to_string(required) + " prior days, have " +
                           std::to_string(available)),
        required(required), available(available) {}

  int required;
  int available;
};

}  // namespace alphaforge

#endif  // ALPHAFORGE_ERRORS_HPP_
