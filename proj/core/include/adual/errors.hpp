#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace adual {

/// Malformed caller input: bad arities, mismatched universes, unparsable files.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A materialized universe, candidate space or closure exceeded the configured budget.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(const std::string& what, std::uint64_t refused)
      : std::runtime_error(what), refused_(refused) {}

  /// The count that was refused (saturates at UINT64_MAX on overflow).
  std::uint64_t refused() const noexcept { return refused_; }

 private:
  std::uint64_t refused_;
};

/// A mathematical invariant failed. Signals a bug or an input that is not
/// what the caller claimed (e.g. a non-affine term passed as affine).
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Text-format parse failure with file/line/token context.
class ParseError : public InputError {
 public:
  ParseError(const std::string& file, std::size_t line, const std::string& token,
             const std::string& message)
      : InputError(file + ":" + std::to_string(line) + ": " + message +
                   (token.empty() ? std::string() : " (at '" + token + "')")),
        file_(file),
        line_(line),
        token_(token) {}

  const std::string& file() const noexcept { return file_; }
  std::size_t line() const noexcept { return line_; }
  const std::string& token() const noexcept { return token_; }

 private:
  std::string file_;
  std::size_t line_;
  std::string token_;
};

}  // namespace adual
