#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace yall {

// Base of everything the library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad configuration or arguments. The CLI maps these to exit code 1.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Problems with the data itself. The CLI maps these to exit code 2.
class DataError : public Error {
 public:
  using Error::Error;
};

class ParseError : public DataError {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : DataError(source + ":" + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class SchemaError : public DataError {
 public:
  SchemaError(const std::string& source, std::size_t line, const std::string& field,
              const std::string& what = "missing or invalid field")
      : DataError(source + ":" + std::to_string(line) + ": " + what + " '" + field + "'"),
        line_(line),
        field_(field) {}
  std::size_t line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  std::size_t line_;
  std::string field_;
};

class AlignmentError : public DataError {
 public:
  AlignmentError(std::size_t english_lines, std::size_t spanish_lines)
      : DataError("bitext is not line-aligned: english has " + std::to_string(english_lines) +
                  " lines, spanish has " + std::to_string(spanish_lines)),
        english_lines_(english_lines),
        spanish_lines_(spanish_lines) {}
  std::size_t english_lines() const { return english_lines_; }
  std::size_t spanish_lines() const { return spanish_lines_; }

 private:
  std::size_t english_lines_;
  std::size_t spanish_lines_;
};

class EncodingError : public DataError {
 public:
  EncodingError(const std::string& source, std::size_t line)
      : DataError(source + ":" + std::to_string(line) + ": invalid UTF-8"), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class InvalidMatch : public DataError {
 public:
  using DataError::DataError;
};

class EmptyClassError : public DataError {
 public:
  using DataError::DataError;
};

class TooSmallError : public DataError {
 public:
  using DataError::DataError;
};

class DegenerateDataError : public DataError {
 public:
  using DataError::DataError;
};

class IndexError : public DataError {
 public:
  using DataError::DataError;
};

class RangeError : public DataError {
 public:
  using DataError::DataError;
};

}  // namespace yall
