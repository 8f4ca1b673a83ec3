#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fbvp {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter is outside its admissible range (grid size, exponent, preset point, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A function does not carry the derivative layers an operation needs.
class MissingDerivativeLayers : public Error {
 public:
  MissingDerivativeLayers(int required, int available)
      : Error("operation needs " + std::to_string(required) + " derivative layer(s), function carries " +
              std::to_string(available)),
        required_(required),
        available_(available) {}

  int required() const noexcept { return required_; }
  int available() const noexcept { return available_; }

 private:
  int required_;
  int available_;
};

/// Expression evaluation left its domain (pole, log of zero, overflow).
class DomainFault : public Error {
 public:
  DomainFault(const std::string& what, double t) : Error(what + " at t = " + std::to_string(t)), t_(t) {}
  double t() const noexcept { return t_; }

 private:
  double t_;
};

/// A matrix sample is numerically singular.
class SingularSample : public Error {
 public:
  SingularSample(double t, double abs_det)
      : Error("near-singular matrix sample at t = " + std::to_string(t) + " (|det| = " + std::to_string(abs_det) + ")"),
        t_(t),
        abs_det_(abs_det) {}

  double t() const noexcept { return t_; }
  double abs_det() const noexcept { return abs_det_; }

 private:
  double t_;
  double abs_det_;
};

/// Integration produced non-finite values.
class BlowUp : public Error {
 public:
  explicit BlowUp(double t) : Error("non-finite values during integration, last finite t = " + std::to_string(t)), t_(t) {}
  double t() const noexcept { return t_; }

 private:
  double t_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t offset, const std::string& message)
      : Error("parse error at offset " + std::to_string(offset) + ": " + message), offset_(offset), message_(message) {}

  std::size_t offset() const noexcept { return offset_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::size_t offset_;
  std::string message_;
};

}  // namespace fbvp
