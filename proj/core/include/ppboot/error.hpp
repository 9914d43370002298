#pragma once

#include <stdexcept>
#include <string>

namespace ppboot {

/// Broad failure classes. The CLI maps them onto process exit codes.
enum class ErrorKind {
  invalid_parameter,  // bad argument or configuration
  numerical,          // non-finite values, unattainable levels, degenerate counts
  data,               // malformed or inconsistent input files
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class InvalidParameter : public Error {
 public:
  explicit InvalidParameter(const std::string& what) : Error(ErrorKind::invalid_parameter, what) {}
};

/// An intensity evaluated above its declared upper bound during thinning.
class InvalidBound : public Error {
 public:
  explicit InvalidBound(const std::string& what) : Error(ErrorKind::invalid_parameter, what) {}
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(ErrorKind::numerical, what) {}
};

/// No finite t reaches the requested coverage (alpha == 0).
class UnattainableLevel : public Error {
 public:
  explicit UnattainableLevel(const std::string& what) : Error(ErrorKind::invalid_parameter, what) {}
};

/// Zero observed count (or zero Poisson mean) where a positive one is required.
class DegenerateCount : public Error {
 public:
  explicit DegenerateCount(const std::string& what) : Error(ErrorKind::numerical, what) {}
};

/// A moment asks for more distinct categories than the multinomial has.
class UndefinedMoment : public Error {
 public:
  explicit UndefinedMoment(const std::string& what) : Error(ErrorKind::invalid_parameter, what) {}
};

class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(ErrorKind::data, what) {}
};

class DuplicatePoint : public DataError {
 public:
  DuplicatePoint(const std::string& what, std::size_t row) : DataError(what), row_(row) {}
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

class OutOfWindow : public DataError {
 public:
  OutOfWindow(const std::string& what, std::size_t row) : DataError(what), row_(row) {}
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

}  // namespace ppboot
