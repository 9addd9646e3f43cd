#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace onestep {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input. Line and column are 1-based; 0 means "not known".
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : Error(format(message, line, column)), line_(line), column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  static std::string format(const std::string& message, std::size_t line,
                            std::size_t column) {
    if (line == 0) return message;
    std::string where = "line " + std::to_string(line);
    if (column != 0) where += ", column " + std::to_string(column);
    return where + ": " + message;
  }

  std::size_t line_;
  std::size_t column_;
};

/// A structurally parsed object violates a semantic invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A polynomial references a symbol with no numeric value.
class UnboundSymbolError : public Error {
 public:
  explicit UnboundSymbolError(const std::string& symbol)
      : Error("unbound symbol '" + symbol + "'"), symbol_(symbol) {}

  const std::string& symbol() const { return symbol_; }

 private:
  std::string symbol_;
};

/// Diffusion matrix has an eigenvalue below the allowed negative tolerance,
/// or is not symmetric.
class NotPsdError : public Error {
 public:
  using Error::Error;
};

/// Invalid simulation or command-line configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace onestep
