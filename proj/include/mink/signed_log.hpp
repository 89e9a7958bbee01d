#pragma once

#include "mink/precision.hpp"

#include <cmath>
#include <limits>
#include <span>

namespace mink {

/// sign * exp(log_mag); exact zero has sign 0 and log_mag = -inf.
template <typename T> struct BasicSignedLogValue {
  int sign = 0;
  T log_mag = -std::numeric_limits<T>::infinity();

  [[nodiscard]] static BasicSignedLogValue zero() noexcept { return {}; }
  [[nodiscard]] static BasicSignedLogValue from_log(T log_mag, int sign = 1) noexcept {
    return sign == 0 ? zero() : BasicSignedLogValue{sign > 0 ? 1 : -1, log_mag};
  }
  [[nodiscard]] static BasicSignedLogValue from_double(T x) noexcept {
    using std::abs;
    using std::log;
    if (x == 0)
      return zero();
    return {x > 0 ? 1 : -1, T(log(T(abs(x))))};
  }
  [[nodiscard]] T value() const noexcept {
    using std::exp;
    return sign == 0 ? T(0) : T(sign * exp(log_mag));
  }
  [[nodiscard]] double to_double() const noexcept { return static_cast<double>(value()); }
  [[nodiscard]] bool is_zero() const noexcept { return sign == 0; }
};

template <typename T>
[[nodiscard]] BasicSignedLogValue<T> operator*(BasicSignedLogValue<T> a, BasicSignedLogValue<T> b) noexcept {
  if (a.sign == 0 || b.sign == 0)
    return BasicSignedLogValue<T>::zero();
  return {a.sign * b.sign, a.log_mag + b.log_mag};
}

/// Positive and negative magnitudes of a signed sum, kept apart until the end.
template <typename T> struct BasicSignedPools {
  T log_pos = -std::numeric_limits<T>::infinity();
  T log_neg = -std::numeric_limits<T>::infinity();
};

/// A negative result larger than this fraction of the positive pool is an
/// error; smaller negatives are taken as zero.
inline constexpr double kCancellationTolerance = 1e-10;

/// Results of either sign below this fraction of the positive pool are
/// rounding residue and are taken as zero (double accumulation).
inline constexpr double kResidueTolerance = 1e-10;

/// Residue threshold for extended-precision accumulation.
inline constexpr double kWideResidueTolerance = 1e-15;

/// Residue threshold for quad-precision accumulation.
inline constexpr double kQuadResidueTolerance = 1e-30;

template <typename T> struct BasicSignedSum {
  BasicSignedLogValue<T> value;
  /// log of the positive pool; the scale that cancellation is judged against.
  T log_positive = -std::numeric_limits<T>::infinity();
  T log_negative = -std::numeric_limits<T>::infinity();
  /// True when the difference fell under the residue threshold and was zeroed.
  bool cancelled = false;
};

using SignedLogValue = BasicSignedLogValue<double>;
using SignedPools = BasicSignedPools<double>;
using SignedSum = BasicSignedSum<double>;

using WideSignedLogValue = BasicSignedLogValue<WideReal>;
using WideSignedPools = BasicSignedPools<WideReal>;
using WideSignedSum = BasicSignedSum<WideReal>;

/// Two-pass signed log-sum-exp: shift each pool by its maximum, then add the
/// shifted exponentials with Neumaier compensation.
template <typename T>
[[nodiscard]] BasicSignedPools<T> reduce_terms(std::span<const BasicSignedLogValue<T>> terms) noexcept;

/// Merges partial pools with the same two-pass scheme, in the given order.
template <typename T>
[[nodiscard]] BasicSignedPools<T> merge_pools(std::span<const BasicSignedPools<T>> parts) noexcept;

/// Signed merge of the pools. A difference below `residue` times the positive
/// pool is zeroed and flagged.
template <typename T>
[[nodiscard]] BasicSignedSum<T> finalize(const BasicSignedPools<T> &pools, double residue) noexcept;

[[nodiscard]] inline SignedPools reduce_terms(std::span<const SignedLogValue> terms) noexcept {
  return reduce_terms<double>(terms);
}
[[nodiscard]] inline SignedPools merge_pools(std::span<const SignedPools> parts) noexcept {
  return merge_pools<double>(parts);
}
[[nodiscard]] inline SignedSum finalize(const SignedPools &pools) noexcept {
  return finalize<double>(pools, kResidueTolerance);
}

/// log(exp(a) + exp(b)).
template <typename T> [[nodiscard]] T log_add(T a, T b) noexcept;

/// Two-pass log-sum-exp of plain log values.
template <typename T> [[nodiscard]] T log_sum_exp(std::span<const T> logs) noexcept;

[[nodiscard]] inline double log_add(double a, double b) noexcept { return log_add<double>(a, b); }
[[nodiscard]] inline double log_sum_exp(std::span<const double> logs) noexcept { return log_sum_exp<double>(logs); }

} // namespace mink
