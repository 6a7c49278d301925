#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hbl {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input that violates a precondition of an estimator or constructor.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// Evaluation point or interval outside the domain of a function.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A band cannot be formed because the estimate carries no information on S.
class DegenerateBand : public Error {
 public:
  using Error::Error;
};

class ParseError : public InvalidInput {
 public:
  ParseError(std::size_t line, const std::string& what)
      : InvalidInput("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace hbl
