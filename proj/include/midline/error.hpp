#pragma once

#include <stdexcept>
#include <string>

namespace midline {

// Error categories map one-to-one onto CLI exit codes.
enum class ErrorKind {
  invalid_argument = 1,
  format = 2,
  degenerate_geometry = 3,
  empty_activation = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  int exit_code() const noexcept { return static_cast<int>(kind_); }

 private:
  ErrorKind kind_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what)
      : Error(ErrorKind::invalid_argument, what) {}
};

class FormatError : public Error {
 public:
  explicit FormatError(const std::string& what)
      : Error(ErrorKind::format, what) {}
};

class GeometryError : public Error {
 public:
  explicit GeometryError(const std::string& what)
      : Error(ErrorKind::degenerate_geometry, what) {}
};

class ActivationError : public Error {
 public:
  explicit ActivationError(const std::string& what)
      : Error(ErrorKind::empty_activation, what) {}
};

}  // namespace midline
