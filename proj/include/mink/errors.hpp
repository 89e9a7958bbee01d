#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace mink {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A source or natural parameter lies outside its domain.
class ParameterDomainError : public Error {
public:
  ParameterDomainError(std::string field, const std::string &what)
      : Error(field + ": " + what), field_(std::move(field)) {}
  [[nodiscard]] const std::string &field() const noexcept { return field_; }

private:
  std::string field_;
};

/// A mixture specification document is malformed. `where()` is a field path
/// such as `components[1].params.sigma`, or `line N` for syntax errors.
class SpecError : public Error {
public:
  SpecError(std::string where, const std::string &what)
      : Error(where + ": " + what), where_(std::move(where)) {}
  [[nodiscard]] const std::string &where() const noexcept { return where_; }

private:
  std::string where_;
};

/// A natural parameter is outside the conic parameter space.
class ConeViolationError : public Error {
public:
  using Error::Error;
};

/// A point handed to a density is outside the family's support.
class SupportError : public Error {
public:
  using Error::Error;
};

/// An expansion would enumerate more terms than the configured cap.
class BudgetError : public Error {
public:
  BudgetError(std::string exact_count, std::uint64_t cap)
      : Error("term budget exceeded: expansion needs " + exact_count +
              " terms, cap is " + std::to_string(cap)),
        count_(std::move(exact_count)), cap_(cap) {}
  /// Exact decimal term count (may exceed 64 bits).
  [[nodiscard]] const std::string &count() const noexcept { return count_; }
  [[nodiscard]] std::uint64_t cap() const noexcept { return cap_; }

private:
  std::string count_;
  std::uint64_t cap_;
};

/// The requested exponent has no closed form for this distance.
class UnsupportedExponentError : public Error {
public:
  using Error::Error;
};

/// A quantity that must be non-negative accumulated to a significantly
/// negative value.
class CancellationError : public Error {
public:
  CancellationError(const std::string &what, double residual)
      : Error(what + " (signed residual " + std::to_string(residual) + ")"),
        residual_(residual) {}
  [[nodiscard]] double residual() const noexcept { return residual_; }

private:
  double residual_;
};

/// A library invariant was broken; indicates a bug or misconfiguration.
class InternalInvariantError : public Error {
public:
  using Error::Error;
};

/// Oracle misuse or failure (incompatible method, non-convergence).
class OracleError : public Error {
public:
  using Error::Error;
};

} // namespace mink
