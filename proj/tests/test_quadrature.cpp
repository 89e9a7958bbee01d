#include "mink/errors.hpp"
#include "mink/quadrature.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

using namespace mink;

TEST_CASE("polynomials up to degree 13 integrate exactly on one panel") {
  const QuadratureOptions opts{1e-14, 1e-300, 1};
  for (int deg = 0; deg <= 13; ++deg) {
    const auto r = integrate_interval([deg](double x) { return std::pow(x, deg); }, -1.0, 2.0, {}, opts);
    const double exact = (std::pow(2.0, deg + 1) - std::pow(-1.0, deg + 1)) / (deg + 1);
    CHECK(r.value == doctest::Approx(exact).epsilon(1e-14));
  }
}

TEST_CASE("kinks at breakpoints") {
  const double bp[] = {0.3};
  const auto r = integrate_interval([](double x) { return std::abs(x - 0.3); }, -1.0, 1.0, bp, {});
  CHECK(r.value == doctest::Approx(0.5 * 1.3 * 1.3 + 0.5 * 0.7 * 0.7).epsilon(1e-13));
}

TEST_CASE("real-line integrals") {
  const auto gauss = integrate_real_line([](double x) { return std::exp(-x * x); }, 0.0, 1.0, {}, {});
  CHECK(gauss.value == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-12));

  const double bp[] = {0.0};
  const auto lap = integrate_real_line([](double x) { return std::exp(-std::abs(x)); }, 0.0, 4.0, bp, {});
  CHECK(lap.value == doctest::Approx(2.0).epsilon(1e-12));

  const auto shifted =
      integrate_real_line([](double x) { return std::exp(-0.5 * (x - 30.0) * (x - 30.0)); }, 30.0, 2.0, {}, {});
  CHECK(shifted.value == doctest::Approx(std::sqrt(2 * std::numbers::pi)).epsilon(1e-12));
}

TEST_CASE("non-convergence is reported") {
  const QuadratureOptions opts{1e-12, 1e-300, 3};
  CHECK_THROWS_AS((void)integrate_interval([](double x) { return std::sin(1.0 / (x + 1e-3)); }, 0.0, 1.0, {}, opts),
                  OracleError);
}
