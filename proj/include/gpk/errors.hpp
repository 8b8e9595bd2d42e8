#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gpk/rational.hpp"

namespace gpk {

/// The requested operation has no mathematical value on this input
/// (conditioning on a null event, empty credal set, ...).
class UndefinedOperation : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Empty credal set. The certificate is a Farkas-style multiplier vector
/// as produced by the LP kernel; its meaning is documented where thrown.
class InfeasibleError : public UndefinedOperation {
 public:
  InfeasibleError(const std::string& what, std::vector<Rational> certificate)
      : UndefinedOperation(what), certificate_(std::move(certificate)) {}

  const std::vector<Rational>& certificate() const noexcept { return certificate_; }

 private:
  std::vector<Rational> certificate_;
};

/// Malformed document text.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : std::runtime_error(line == 0 ? message
                                     : "line " + std::to_string(line) + ": " + message),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace gpk
