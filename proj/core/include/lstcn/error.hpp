#pragma once

#include <stdexcept>
#include <string>

namespace lstcn {

// Base for every error raised by the library. The category drives the CLI
// exit code.
class Error : public std::runtime_error {
 public:
  enum class Category { kValidation, kIo, kNumerical };

  Error(Category category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  Category category() const noexcept { return category_; }

 private:
  Category category_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what)
      : Error(Category::kValidation, what) {}
};

// Operand shapes do not conform.
class ShapeError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Malformed input file; carries the 1-based line number when known.
class ParseError : public ValidationError {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : ValidationError(line == 0 ? what
                                  : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(Category::kIo, what) {}
};

class SingularError : public Error {
 public:
  explicit SingularError(const std::string& what)
      : Error(Category::kNumerical, what) {}
};

// Forecast requested from a model that has not been fitted on any patch.
class NotReadyError : public Error {
 public:
  explicit NotReadyError(const std::string& what)
      : Error(Category::kValidation, what) {}
};

}  // namespace lstcn
