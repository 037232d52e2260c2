#pragma once

#include <numbers>
#include <stdexcept>
#include <string>

namespace holoshannon {

// Natural units throughout: ħ = 1, so Planck's constant h = 2π.
inline constexpr double kHbar = 1.0;
inline constexpr double kPlanck = 2.0 * std::numbers::pi * kHbar;
inline constexpr double kLn2 = std::numbers::ln2;
inline constexpr double kPi = std::numbers::pi;

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Scenario or configuration file could not be validated.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& message)
      : Error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// An iterative solve ran out of iterations.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& message, double residual)
      : Error(message), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

namespace detail {
inline void require(bool condition, const std::string& message) {
  if (!condition) throw DomainError(message);
}
}  // namespace detail

}  // namespace holoshannon
