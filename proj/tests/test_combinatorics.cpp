#include "mink/combinatorics.hpp"
#include "mink/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

using namespace mink;

namespace {

BigInt factorial(unsigned n) {
  BigInt f = 1;
  for (unsigned i = 2; i <= n; ++i)
    f *= i;
  return f;
}

} // namespace

TEST_CASE("composition enumeration examples") {
  const auto c32 = enumerate_compositions(3, 2);
  REQUIRE(c32.size() == 4);
  const std::vector<std::vector<unsigned>> expected{{3, 0}, {2, 1}, {1, 2}, {0, 3}};
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(c32[i].parts == expected[i]);
    CHECK(c32[i].index == i);
  }
  const auto c03 = enumerate_compositions(0, 3);
  REQUIRE(c03.size() == 1);
  CHECK(c03[0].parts == std::vector<unsigned>{0, 0, 0});
  CHECK(enumerate_compositions(2, 3).size() == 6);
}

TEST_CASE("enumeration follows the nested-loop order") {
  // t1 outermost, t2 inner: parts = (α - t1, t1 - t2, t2)
  std::vector<std::vector<unsigned>> expected;
  const unsigned alpha = 4;
  for (unsigned t1 = 0; t1 <= alpha; ++t1)
    for (unsigned t2 = 0; t2 <= t1; ++t2)
      expected.push_back({alpha - t1, t1 - t2, t2});
  const auto got = enumerate_compositions(alpha, 3);
  REQUIRE(got.size() == expected.size());
  for (std::size_t i = 0; i < got.size(); ++i)
    CHECK(got[i].parts == expected[i]);
}

TEST_CASE("random access matches sequential enumeration") {
  for (unsigned k = 1; k <= 5; ++k) {
    for (unsigned alpha = 0; alpha <= 6; ++alpha) {
      const Compositions comps(alpha, k);
      const auto all = enumerate_compositions(alpha, k);
      for (std::uint64_t i = 0; i < comps.size(); ++i) {
        const auto cur = comps.at(i);
        CHECK(std::vector<unsigned>(cur.parts().begin(), cur.parts().end()) == all[i].parts);
      }
    }
  }
}

TEST_CASE("counts, uniqueness and sums for alpha <= 8, k <= 6") {
  for (unsigned k = 1; k <= 6; ++k) {
    for (unsigned alpha = 0; alpha <= 8; ++alpha) {
      const auto all = enumerate_compositions(alpha, k);
      CHECK(BigInt(all.size()) == binomial(k + alpha - 1, alpha));
      std::set<std::vector<unsigned>> seen;
      for (const auto &c : all) {
        unsigned s = 0;
        for (unsigned p : c.parts)
          s += p;
        CHECK(s == alpha);
        seen.insert(c.parts);
      }
      CHECK(seen.size() == all.size());
    }
  }
}

TEST_CASE("budget errors carry the exact count") {
  try {
    const Compositions comps(8, 6, 100);
    FAIL("expected a budget error");
  } catch (const BudgetError &e) {
    CHECK(e.count() == "1287");
    CHECK(e.cap() == 100);
  }
  try {
    const Compositions comps(60, 80);
    FAIL("expected a budget error");
  } catch (const BudgetError &e) {
    CHECK(BigInt(e.count()) == binomial(139, 60));
  }
}

TEST_CASE("multinomial coefficient examples") {
  const unsigned a[] = {1, 1};
  const unsigned b[] = {2, 1, 1};
  const unsigned c[] = {3, 0};
  CHECK(multinomial_coeff_exact(a) == 2);
  CHECK(multinomial_coeff_exact(b) == 12);
  CHECK(multinomial_coeff_exact(c) == 1);
  CHECK(multinomial_coeff_log(a) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(multinomial_coeff_log(b) == doctest::Approx(std::log(12.0)).epsilon(1e-15));
  const unsigned tens[] = {10, 10, 10};
  CHECK(multinomial_coeff_exact(tens) == BigInt("5550996791340"));
  CHECK(multinomial_coeff_log(tens) == doctest::Approx(29.3449986296036185).epsilon(1e-14));
}

TEST_CASE("binomial examples") {
  CHECK(binomial(4, 3) == 4);
  CHECK(binomial(5, 0) == 1);
  CHECK(binomial(10, 5) == 252);
  CHECK(binomial(3, 5) == 0);
  CHECK(binomial(100, 50) == BigInt("100891344545564193334812497256"));
}

TEST_CASE("multinomial theorem at x_i = 1: sum of coefficients is k^alpha") {
  for (unsigned k = 1; k <= 5; ++k) {
    for (unsigned alpha = 0; alpha <= 8; ++alpha) {
      PascalSimplex simplex;
      BigInt total = 0;
      for (const auto &c : enumerate_compositions(alpha, k))
        total += simplex.coefficient(c.parts);
      CHECK(total == boost::multiprecision::pow(BigInt(k), alpha));
    }
  }
}

TEST_CASE("nested binomial products equal the multinomial coefficient") {
  for (const auto &c : enumerate_compositions(7, 4)) {
    // C(α, t1) C(t1, t2) C(t2, t3) with t_j the tail sums
    unsigned tail = 7;
    BigInt product = 1;
    for (std::size_t j = 0; j + 1 < c.parts.size(); ++j) {
      const unsigned next = tail - c.parts[j];
      product *= binomial(tail, next);
      tail = next;
    }
    CHECK(product == multinomial_coeff_exact(c.parts));
  }
}

TEST_CASE("Pascal recurrence and log agreement on random compositions") {
  std::mt19937_64 rng(17);
  PascalSimplex simplex;
  for (int trial = 0; trial < 300; ++trial) {
    const unsigned k = 1 + rng() % 6;
    std::vector<unsigned> parts(k);
    for (auto &p : parts)
      p = rng() % 9;
    BigInt recurrence = 0;
    for (unsigned i = 0; i < k; ++i) {
      if (parts[i] == 0)
        continue;
      auto lowered = parts;
      --lowered[i];
      recurrence += simplex.coefficient(lowered);
    }
    unsigned total = 0;
    for (unsigned p : parts)
      total += p;
    const BigInt exact = simplex.coefficient(parts);
    if (total > 0)
      CHECK(recurrence == exact);
    // factorial form as an independent check
    BigInt fact = factorial(total);
    for (unsigned p : parts)
      fact /= factorial(p);
    CHECK(fact == exact);
    const double log_exact = std::log(static_cast<double>(exact));
    const double log_coeff = multinomial_coeff_log(parts);
    CHECK(std::abs(log_coeff - log_exact) <= 1e-12 * std::max(1.0, std::abs(log_exact)));
    const LogFactorials table(64);
    CHECK(std::abs(table.multinomial(parts) - log_exact) <= 1e-12 * std::max(1.0, std::abs(log_exact)));
  }
}
