#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace mink {

using BigInt = boost::multiprecision::cpp_int;

inline constexpr std::uint64_t kDefaultTermCap = 100'000'000;

/// C(n, r), exact. Returns 0 when r > n.
[[nodiscard]] BigInt binomial(std::uint64_t n, std::uint64_t r);

/// Number of weak compositions of `alpha` into `k` parts, C(k + alpha - 1, alpha).
[[nodiscard]] BigInt composition_count(unsigned alpha, unsigned k);

/// One weak composition (a_1, ..., a_k) of alpha, with its enumeration index.
struct Composition {
  std::vector<unsigned> parts;
  std::uint64_t index = 0;
};

/// Weak compositions of `alpha` into `k` parts in the order produced by the
/// nested-loop form of the multinomial theorem:
///
///   for t1 in 0..alpha, for t2 in 0..t1, ..., for t_{k-1} in 0..t_{k-2}
///   parts = (alpha - t1, t1 - t2, ..., t_{k-2} - t_{k-1}, t_{k-1})
///
/// so the first composition is (alpha, 0, ..., 0) and the last (0, ..., 0, alpha).
/// Any index can be reached directly with `at`, which is what lets parallel
/// consumers split the stream into contiguous ranges.
class Compositions {
public:
  /// Throws BudgetError when the count exceeds `term_cap`.
  Compositions(unsigned alpha, unsigned k, std::uint64_t term_cap = kDefaultTermCap);

  [[nodiscard]] unsigned alpha() const noexcept { return alpha_; }
  [[nodiscard]] unsigned parts() const noexcept { return k_; }
  [[nodiscard]] std::uint64_t size() const noexcept { return size_; }

  class Cursor {
  public:
    [[nodiscard]] std::span<const unsigned> parts() const noexcept { return parts_; }
    [[nodiscard]] std::uint64_t index() const noexcept { return index_; }
    /// Advance to the next composition; false once the stream is exhausted.
    bool next() noexcept;

  private:
    friend class Compositions;
    unsigned alpha_ = 0;
    std::uint64_t index_ = 0;
    std::uint64_t size_ = 0;
    std::vector<unsigned> tails_; // tails_[j] = parts[j] + ... + parts[k-1]
    std::vector<unsigned> parts_;
    void sync_parts() noexcept;
  };

  /// Cursor positioned at composition `index` (< size()).
  [[nodiscard]] Cursor at(std::uint64_t index) const;
  [[nodiscard]] Cursor begin() const { return at(0); }

private:
  unsigned alpha_;
  unsigned k_;
  std::uint64_t size_;
};

/// Materialized enumeration, for small cases and tests.
[[nodiscard]] std::vector<Composition> enumerate_compositions(unsigned alpha, unsigned k,
                                                              std::uint64_t term_cap = kDefaultTermCap);

/// Multinomial coefficients by the Pascal's-simplex recurrence
///   C(a; a_1..a_k) = sum_i C(a-1; a_1, .., a_i - 1, .., a_k)
/// with memoization. Not thread-safe; build one per consumer.
class PascalSimplex {
public:
  [[nodiscard]] BigInt coefficient(std::span<const unsigned> parts);
  [[nodiscard]] std::size_t memo_size() const noexcept { return memo_.size(); }

private:
  std::map<std::vector<unsigned>, BigInt> memo_;
};

[[nodiscard]] BigInt multinomial_coeff_exact(std::span<const unsigned> parts);

/// log(a! / (a_1! ... a_k!)) through log-Gamma sums.
[[nodiscard]] double multinomial_coeff_log(std::span<const unsigned> parts);

/// Table of log n! for n <= max_n, shared by the hot loops.
class LogFactorials {
public:
  explicit LogFactorials(unsigned max_n);
  [[nodiscard]] double operator()(unsigned n) const { return table_.at(n); }
  /// log multinomial coefficient of `parts`, which must sum to <= max_n.
  [[nodiscard]] double multinomial(std::span<const unsigned> parts) const;

private:
  std::vector<double> table_;
};

} // namespace mink
