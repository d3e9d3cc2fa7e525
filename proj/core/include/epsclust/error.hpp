#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace epsclust {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed or invalid user input (data files, parameters).
class InputError : public Error {
public:
  using Error::Error;
};

class ParseError : public InputError {
public:
  ParseError(std::size_t row, const std::string& what)
      : InputError("row " + std::to_string(row) + ": " + what), row_(row) {}

  std::size_t row() const noexcept { return row_; }

private:
  std::size_t row_;
};

class ValidationError : public InputError {
public:
  using InputError::InputError;
};

/// An exact solver was asked to handle a problem above its enumeration guard.
class SizeLimitError : public Error {
public:
  using Error::Error;
};

/// A validity score is undefined for the given clustering.
class UndefinedScoreError : public Error {
public:
  using Error::Error;
};

}  // namespace epsclust
