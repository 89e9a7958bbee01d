#include "mink/combinatorics.hpp"

#include "mink/errors.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <numeric>

namespace mink {

BigInt binomial(std::uint64_t n, std::uint64_t r) {
  if (r > n)
    return 0;
  r = std::min(r, n - r);
  BigInt acc = 1;
  for (std::uint64_t i = 1; i <= r; ++i) {
    acc *= n - r + i;
    acc /= i; // exact: acc holds C(n - r + i, i)
  }
  return acc;
}

BigInt composition_count(unsigned alpha, unsigned k) {
  if (k == 0)
    return alpha == 0 ? 1 : 0;
  return binomial(std::uint64_t{k} + alpha - 1, alpha);
}

namespace {

// Completions of an inner loop nest whose current bound is `bound` with
// `levels` remaining loop variables: weak compositions of bound into levels+1 parts.
std::uint64_t completions(unsigned bound, unsigned levels) {
  return static_cast<std::uint64_t>(binomial(std::uint64_t{bound} + levels, levels));
}

} // namespace

Compositions::Compositions(unsigned alpha, unsigned k, std::uint64_t term_cap) : alpha_(alpha), k_(k) {
  if (k == 0)
    throw InternalInvariantError("compositions need at least one part");
  const BigInt count = composition_count(alpha, k);
  if (count > term_cap)
    throw BudgetError(count.str(), term_cap);
  size_ = static_cast<std::uint64_t>(count);
}

Compositions::Cursor Compositions::at(std::uint64_t index) const {
  if (index >= size_)
    throw InternalInvariantError("composition index out of range");
  Cursor c;
  c.alpha_ = alpha_;
  c.index_ = index;
  c.size_ = size_;
  c.tails_.assign(k_, 0);
  c.tails_[0] = alpha_;
  std::uint64_t rest = index;
  for (unsigned j = 1; j < k_; ++j) {
    const unsigned levels_after = k_ - 1 - j;
    unsigned v = 0;
    for (;; ++v) {
      const std::uint64_t n = completions(v, levels_after);
      if (rest < n)
        break;
      rest -= n;
    }
    c.tails_[j] = v;
  }
  c.sync_parts();
  return c;
}

void Compositions::Cursor::sync_parts() noexcept {
  const std::size_t k = tails_.size();
  parts_.resize(k);
  for (std::size_t j = 0; j + 1 < k; ++j)
    parts_[j] = tails_[j] - tails_[j + 1];
  parts_[k - 1] = tails_[k - 1];
}

bool Compositions::Cursor::next() noexcept {
  if (index_ + 1 >= size_)
    return false;
  ++index_;
  // Innermost loop variable is tails_[k-1]; bump the deepest one that can
  // still grow and reset every loop nested inside it.
  for (std::size_t j = tails_.size() - 1; j >= 1; --j) {
    if (tails_[j] < tails_[j - 1]) {
      ++tails_[j];
      for (std::size_t i = j + 1; i < tails_.size(); ++i)
        tails_[i] = 0;
      sync_parts();
      return true;
    }
  }
  return false; // unreachable while index_ < size_
}

std::vector<Composition> enumerate_compositions(unsigned alpha, unsigned k, std::uint64_t term_cap) {
  const Compositions comps(alpha, k, term_cap);
  std::vector<Composition> out;
  out.reserve(comps.size());
  auto cur = comps.begin();
  do {
    out.push_back({std::vector<unsigned>(cur.parts().begin(), cur.parts().end()), cur.index()});
  } while (cur.next());
  return out;
}

BigInt PascalSimplex::coefficient(std::span<const unsigned> parts) {
  // The coefficient is symmetric in its parts and ignores zero parts.
  std::vector<unsigned> key;
  for (unsigned p : parts)
    if (p > 0)
      key.push_back(p);
  std::sort(key.begin(), key.end(), std::greater<>());
  if (key.size() <= 1)
    return 1;
  if (auto it = memo_.find(key); it != memo_.end())
    return it->second;
  BigInt acc = 0;
  std::vector<unsigned> lowered;
  for (std::size_t i = 0; i < key.size(); ++i) {
    if (i > 0 && key[i] == key[i - 1]) {
      // Same multiset as the previous lowering; reuse it.
      acc += coefficient(lowered);
      continue;
    }
    lowered = key;
    --lowered[i];
    acc += coefficient(lowered);
  }
  memo_.emplace(std::move(key), acc);
  return acc;
}

BigInt multinomial_coeff_exact(std::span<const unsigned> parts) {
  PascalSimplex simplex;
  return simplex.coefficient(parts);
}

double multinomial_coeff_log(std::span<const unsigned> parts) {
  const unsigned total = std::accumulate(parts.begin(), parts.end(), 0u);
  double acc = boost::math::lgamma(total + 1.0);
  for (unsigned p : parts)
    acc -= boost::math::lgamma(p + 1.0);
  return acc;
}

LogFactorials::LogFactorials(unsigned max_n) : table_(max_n + 1, 0.0) {
  for (unsigned n = 2; n <= max_n; ++n)
    table_[n] = boost::math::lgamma(n + 1.0);
}

double LogFactorials::multinomial(std::span<const unsigned> parts) const {
  unsigned total = 0;
  double acc = 0.0;
  for (unsigned p : parts) {
    total += p;
    acc -= table_[p];
  }
  return acc + table_.at(total);
}

} // namespace mink
